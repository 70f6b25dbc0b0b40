#include "qeqlog/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "qeqlog/error.hpp"
#include "qeqlog/io.hpp"

namespace qeq::cli {

namespace {

using io::Json;

struct Flags {
  std::string workspace;
  std::optional<int> depth;
  std::optional<int> grid;
  std::optional<std::size_t> budget_interps;
  std::optional<std::size_t> budget_instances;
  bool trace = false;

  std::string theory;
  std::string algebra;
  std::string space;
  std::string judgment;
  std::string lhs;
  std::string rhs;
  std::string eps;
  std::string generators;
  std::vector<std::string> catalog;
};

class Workspace {
 public:
  explicit Workspace(const Flags& flags) {
    std::ifstream in(flags.workspace);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open workspace '" + flags.workspace + "'");
    try {
      raw_ = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
    if (!raw_.is_object()) throw Error(ErrorKind::ParseError, "workspace must be a JSON object");
    grid_ = Grid(flags.grid.value_or(raw_.value("grid", 24)));
    sig_ = raw_.contains("signature") ? io::read_signature(raw_.at("signature")) : Signature{};
    spec_ = raw_.contains("spec") ? io::read_spec(raw_.at("spec")) : GMetSpec::met();
    depth_ = flags.depth.value_or(raw_.value("depth", 2));
    const Json budgets = raw_.value("budgets", Json::object());
    interps_ = flags.budget_interps.value_or(budgets.value("interpretations", kDefaultInterpretationBudget));
    instances_ = flags.budget_instances.value_or(budgets.value("instances", kDefaultInstanceBudget));
    spaces_ = raw_.value("spaces", Json::object());
  }

  const Signature& signature() const { return sig_; }
  const GMetSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }
  int depth() const { return depth_; }
  std::size_t interps() const { return interps_; }

  SaturationOptions options() const { return SaturationOptions{depth_, grid_, instances_}; }

  FuzzySpace space(const std::string& name) const {
    return io::read_space(lookup("spaces", name), grid_);
  }

  /// The empty name stands for the empty theory.
  Theory theory(const std::string& name) const {
    if (name.empty()) return Theory{"empty", {}};
    Theory t = io::read_theory(lookup("theories", name), sig_, grid_, &spaces_);
    if (t.name.empty()) t.name = name;
    return t;
  }

  QuantAlgebra algebra(const std::string& name) const {
    return io::read_algebra(lookup("algebras", name), sig_, grid_);
  }

  Judgment judgment(const std::string& name) const {
    return io::read_judgment(lookup("judgments", name), sig_, grid_, &spaces_);
  }

  std::vector<std::string> names(const char* section) const {
    std::vector<std::string> out;
    if (raw_.contains(section)) {
      for (const auto& [k, v] : raw_.at(section).items()) out.push_back(k);
    }
    return out;
  }

  Json header(const std::string& command) const {
    return Json{{"command", command}, {"grid", grid_.denominator()}, {"depth", depth_}};
  }

 private:
  const Json& lookup(const char* section, const std::string& name) const {
    if (name.empty()) throw Error(ErrorKind::InvalidArgument, std::string("no ") + section + " entry named");
    if (!raw_.contains(section) || !raw_.at(section).contains(name)) {
      throw Error(ErrorKind::UnresolvedName, std::string("no entry '") + name + "' in " + section);
    }
    return raw_.at(section).at(name);
  }

  Json raw_;
  Json spaces_;
  Signature sig_;
  GMetSpec spec_;
  Grid grid_;
  int depth_ = 2;
  std::size_t interps_ = kDefaultInterpretationBudget;
  std::size_t instances_ = kDefaultInstanceBudget;
};

Json interpretation_json(const FuzzySpace& ctx, const QuantAlgebra& alg, const Map& tau) {
  Json out = Json::object();
  for (std::size_t i = 0; i < ctx.size(); ++i) out[ctx.name(i)] = alg.space().name(tau[i]);
  return out;
}

int cmd_check_model(const Workspace& ws, const Flags& f, Json& out) {
  QuantAlgebra alg = ws.algebra(f.algebra);
  Theory theory = ws.theory(f.theory);
  out["algebra"] = f.algebra;
  out["theory"] = theory.name;
  for (std::size_t k = 0; k < theory.judgments.size(); ++k) {
    const Judgment& j = theory.judgments[k];
    SatResult r = satisfies(alg, ws.spec(), j, ws.grid(), ws.interps());
    if (!r.holds) {
      out["model"] = false;
      out["counterexample"] = Json{{"judgment", k},
                                   {"statement", to_string(j)},
                                   {"interpretation", interpretation_json(j.context, alg, *r.counterexample)}};
      return 1;
    }
  }
  out["model"] = true;
  return 0;
}

Judgment query_judgment(const Workspace& ws, const Flags& f) {
  if (!f.judgment.empty()) return ws.judgment(f.judgment);
  if (f.space.empty() || f.lhs.empty() || f.rhs.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give --judgment, or --space with --lhs and --rhs");
  }
  Judgment out{ws.space(f.space), parse_term(f.lhs, ws.signature()), parse_term(f.rhs, ws.signature()), {}};
  if (!f.eps.empty()) out.eps = io::read_value(Json(f.eps), ws.grid());
  return out;
}

int cmd_derive(const Workspace& ws, const Flags& f, Json& out) {
  Judgment j = query_judgment(ws, f);
  Theory theory = ws.theory(f.theory);
  DerivationDB db = saturate(ws.signature(), theory, ws.spec(), j.context, ws.options());
  const bool ok = derives(db, j);
  out["judgment"] = to_string(j);
  out["derivable"] = ok;
  out["distance"] = io::write_value(distance(db, j.lhs, j.rhs));
  if (ok) out["trace"] = io::write_derivation(trace(db, Fact{j.lhs, j.rhs, j.eps}));
  return ok ? 0 : 1;
}

int cmd_distance(const Workspace& ws, const Flags& f, Json& out) {
  Judgment j = query_judgment(ws, f);
  DerivationDB db = saturate(ws.signature(), ws.theory(f.theory), ws.spec(), j.context, ws.options());
  const Rational d = distance(db, j.lhs, j.rhs);
  out["lhs"] = to_string(j.lhs);
  out["rhs"] = to_string(j.rhs);
  out["distance"] = io::write_value(d);
  out["equal"] = db.same_class(db.index_of(j.lhs), db.index_of(j.rhs));
  if (f.trace) out["trace"] = io::write_derivation(trace(db, Fact{j.lhs, j.rhs, d}));
  return 0;
}

int cmd_free(const Workspace& ws, const Flags& f, Json& out) {
  FreeAlgebra fa = build_free(ws.signature(), ws.theory(f.theory), ws.spec(), ws.space(f.space), ws.options());
  out["space"] = f.space;
  const Json body = io::write_free(fa);
  for (const auto& [k, v] : body.items()) {
    if (k != "grid" && k != "depth") out[k] = v;
  }
  return 0;
}

int cmd_entail(const Workspace& ws, const Flags& f, Json& out) {
  Judgment j = query_judgment(ws, f);
  Theory theory = ws.theory(f.theory);
  std::vector<std::string> names = f.catalog.empty() ? ws.names("algebras") : f.catalog;
  std::vector<QuantAlgebra> catalog;
  Json models = Json::array();
  for (const auto& n : names) {
    catalog.push_back(ws.algebra(n));
    if (is_model(catalog.back(), ws.spec(), theory, ws.grid(), ws.interps())) models.push_back(n);
  }
  const bool ok = entails_catalog(catalog, ws.spec(), theory, j, ws.grid(), ws.interps());
  out["judgment"] = to_string(j);
  out["catalog"] = names;
  out["models"] = models;
  out["entailed"] = ok;
  return ok ? 0 : 1;
}

int cmd_monad_laws(const Workspace& ws, const Flags& f, Json& out) {
  MonadInstance mi(ws.signature(), ws.theory(f.theory), ws.spec(), ws.options(), ws.interps());
  FuzzySpace sp = ws.space(f.space);
  MonadLawData data = monad_law_data(mi, sp);
  out["space"] = f.space;
  out["sizes"] = {data.m1->size(), data.m2->size(), data.m3->size()};
  Json laws = Json::array();
  bool ok = true;
  for (const auto& r : check_monad_laws(data)) {
    ok = ok && r.ok();
    laws.push_back(io::write_law(r));
  }
  out["laws"] = laws;
  out["ok"] = ok;
  return ok ? 0 : 1;
}

Map parse_generators(const std::string& text, const FuzzySpace& base, const FuzzySpace& target) {
  Map g(base.size(), 0);
  std::vector<bool> seen(base.size(), false);
  if (text.empty()) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      auto k = target.index_of(base.name(i));
      if (!k) throw Error(ErrorKind::InvalidArgument, "no --map given and '" + base.name(i) + "' is not in the algebra");
      g[i] = *k;
    }
    return g;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "map entries look like a=x");
    auto from = base.index_of(item.substr(0, eq));
    auto to = target.index_of(item.substr(eq + 1));
    if (!from || !to) throw Error(ErrorKind::UnresolvedName, "bad map entry '" + item + "'");
    g[*from] = *to;
    seen[*from] = true;
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!seen[i]) throw Error(ErrorKind::InvalidArgument, "map leaves '" + base.name(i) + "' undefined");
  }
  return g;
}

int cmd_ump(const Workspace& ws, const Flags& f, Json& out) {
  FreeAlgebra fa = build_free(ws.signature(), ws.theory(f.theory), ws.spec(), ws.space(f.space), ws.options());
  QuantAlgebra b = ws.algebra(f.algebra);
  Map gens = parse_generators(f.generators, fa.base(), b.space());
  UmpReport r = check_ump(fa, b, gens, ws.interps());
  out["space"] = f.space;
  out["algebra"] = f.algebra;
  out["classes"] = fa.size();
  out["exists"] = r.exists;
  out["unique"] = r.unique;
  out["candidates"] = r.candidates;
  out["witnesses"] = r.witnesses;
  out["skipped_overflow"] = r.skipped_overflow;
  if (r.exists) {
    Map h = extend_hom(fa, b, gens, ws.interps());
    Json ext = Json::object();
    for (std::size_t c = 0; c < fa.size(); ++c) ext[to_string(fa.representative(c))] = b.space().name(h[c]);
    out["extension"] = ext;
  }
  return r.exists && r.unique ? 0 : 1;
}

int cmd_em_check(const Workspace& ws, const Flags& f, Json& out) {
  MonadInstance mi(ws.signature(), ws.theory(f.theory), ws.spec(), ws.options(), ws.interps());
  QuantAlgebra b = ws.algebra(f.algebra);
  EMCandidate cand = em_from_model(mi, b);
  EMReport report = check_em_laws(mi, cand);
  out["algebra"] = f.algebra;
  out["laws"] = {io::write_law(report.unit_law), io::write_law(report.mult_law)};
  out["nonexpansive"] = report.nonexpansive;
  if (!report.ok()) {
    out["round_trip"] = false;
    return 1;
  }
  InducedModel back = model_from_em(mi, cand);
  const bool same = back.algebra == b;
  out["round_trip"] = same;
  out["is_model"] = back.is_model;
  return same && back.is_model ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantitative equational logic over finite generalized metric spaces", "qeqlog"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--workspace", flags.workspace, "Workspace JSON file")->required();
    cmd->add_option("--depth", flags.depth, "Term depth bound");
    cmd->add_option("--grid", flags.grid, "Grid denominator");
    cmd->add_option("--budget-interps", flags.budget_interps, "Cap on interpretations enumerated");
    cmd->add_option("--budget-instances", flags.budget_instances, "Cap on rule instances during saturation");
    cmd->add_option("--theory", flags.theory, "Theory name (default: the empty theory)");
    return cmd;
  };
  auto query = [&](CLI::App* cmd) {
    cmd->add_option("--judgment", flags.judgment, "Judgment name");
    cmd->add_option("--space", flags.space, "Context space name");
    cmd->add_option("--lhs", flags.lhs, "Left-hand term");
    cmd->add_option("--rhs", flags.rhs, "Right-hand term");
    cmd->add_option("--eps", flags.eps, "Distance bound; omit for equality");
    cmd->add_flag("--trace", flags.trace, "Include a derivation");
  };

  using Handler = int (*)(const Workspace&, const Flags&, Json&);
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto* check = common(app.add_subcommand("check-model", "Check an algebra against a theory"));
  check->add_option("--algebra", flags.algebra, "Algebra name")->required();
  commands.emplace_back(check, cmd_check_model);

  auto* derive = common(app.add_subcommand("derive", "Decide a judgment by saturation"));
  query(derive);
  commands.emplace_back(derive, cmd_derive);

  auto* dist = common(app.add_subcommand("distance", "Least derivable distance between two terms"));
  query(dist);
  commands.emplace_back(dist, cmd_distance);

  auto* fr = common(app.add_subcommand("free", "Build the truncated free algebra"));
  fr->add_option("--space", flags.space, "Base space name")->required();
  commands.emplace_back(fr, cmd_free);

  auto* entail = common(app.add_subcommand("entail", "Check a judgment against a catalog of algebras"));
  query(entail);
  entail->add_option("--catalog", flags.catalog, "Algebra names (default: all)")->delimiter(',');
  commands.emplace_back(entail, cmd_entail);

  auto* laws = common(app.add_subcommand("monad-laws", "Check the monad laws at a space"));
  laws->add_option("--space", flags.space, "Space name")->required();
  commands.emplace_back(laws, cmd_monad_laws);

  auto* ump = common(app.add_subcommand("ump", "Check the universal property against an algebra"));
  ump->add_option("--space", flags.space, "Base space name")->required();
  ump->add_option("--algebra", flags.algebra, "Target algebra name")->required();
  ump->add_option("--map", flags.generators, "Generator map a=x,b=y (default: by name)");
  commands.emplace_back(ump, cmd_ump);

  auto* em = common(app.add_subcommand("em-check", "Round-trip an algebra through its structure map"));
  em->add_option("--algebra", flags.algebra, "Algebra name")->required();
  commands.emplace_back(em, cmd_em_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& [cmd, handler] : commands) {
    if (!cmd->parsed()) continue;
    try {
      Workspace ws(flags);
      Json report = ws.header(cmd->get_name());
      const int code = handler(ws, flags, report);
      out << report.dump(2) << "\n";
      return code;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
    }
    return 2;
  }
  return 2;
}

}  // namespace qeq::cli

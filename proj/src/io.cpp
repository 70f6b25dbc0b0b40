#include "qeqlog/io.hpp"

#include "qeqlog/error.hpp"

namespace qeq::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string read_string(const Json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

Rational read_value(const Json& j, const Grid& grid) {
  if (j.is_string()) {
    Rational r = Rational::parse(j.get<std::string>());
    grid.steps(r);
    return r;
  }
  if (j.is_number_integer()) return grid.value(grid.steps(Rational(j.get<std::int64_t>())));
  if (j.is_number()) return grid.value(grid.steps_of_decimal(j.get<double>()));
  bad("expected a number or fraction string");
}

Json write_value(const Rational& r) { return r.to_string(); }

Signature read_signature(const Json& j) {
  const Json& ops = j.is_object() && j.contains("ops") ? j.at("ops") : j;
  if (!ops.is_object()) bad("signature must be an object of arities");
  Signature sig;
  for (const auto& [name, arity] : ops.items()) {
    if (!arity.is_number_integer()) bad("arity of '" + name + "' must be an integer");
    sig.add(name, arity.get<int>());
  }
  return sig;
}

Json write_signature(const Signature& sig) {
  Json ops = Json::object();
  for (const auto& [name, arity] : sig.ops()) ops[name] = arity;
  return Json{{"ops", ops}};
}

FuzzySpace read_space(const Json& j, const Grid& grid) {
  const Json& carrier = field(j, "carrier");
  if (!carrier.is_array()) bad("carrier must be an array");
  std::vector<std::string> names;
  for (const auto& c : carrier) names.push_back(read_string(c, "carrier element"));
  const std::size_t n = names.size();
  std::vector<Rational> dist;
  const Json& rows = field(j, "dist");
  if (!rows.is_array() || rows.size() != n) bad("dist must be a carrier x carrier array");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) bad("dist must be a carrier x carrier array");
    for (const auto& v : row) dist.push_back(read_value(v, grid));
  }
  return FuzzySpace(std::move(names), std::move(dist));
}

Json write_space(const FuzzySpace& sp) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < sp.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < sp.size(); ++k) row.push_back(write_value(sp.d(i, k)));
    rows.push_back(std::move(row));
  }
  return Json{{"carrier", sp.carrier()}, {"dist", rows}};
}

namespace {

AtomText read_atom(const Json& j) {
  if (j.is_string()) return parse_atom(j.get<std::string>());
  if (j.contains("eq")) {
    const Json& a = j.at("eq");
    if (!a.is_array() || a.size() != 2) bad("eq atom takes two variables");
    return AtomText{true, read_string(a[0], "variable"), read_string(a[1], "variable"), {}};
  }
  if (j.contains("dist")) {
    const Json& a = j.at("dist");
    if (!a.is_array() || a.size() != 3) bad("dist atom takes two variables and a bound");
    std::string bound = a[2].is_string() ? a[2].get<std::string>() : a[2].dump();
    return AtomText{false, read_string(a[0], "variable"), read_string(a[1], "variable"), bound};
  }
  bad("atom must be {\"eq\": [...]} or {\"dist\": [...]}");
}

Json write_atom(const Atom& a, const HornClause& c) {
  if (a.kind == Atom::Kind::Eq) return Json{{"eq", {c.vars[a.lhs], c.vars[a.rhs]}}};
  return Json{{"dist", {c.vars[a.lhs], c.vars[a.rhs], to_string(a.bound, c.params)}}};
}

}  // namespace

GMetSpec read_spec(const Json& j) {
  if (j.is_string()) {
    auto p = parse_preset(j.get<std::string>());
    if (!p) bad("unknown preset '" + j.get<std::string>() + "'");
    return GMetSpec::of(*p);
  }
  if (j.contains("preset")) return read_spec(j.at("preset"));
  GMetSpec spec;
  spec.name = j.contains("name") ? read_string(j.at("name"), "spec name") : "custom";
  const Json& clauses = field(j, "clauses");
  if (!clauses.is_array()) bad("clauses must be an array");
  std::size_t k = 0;
  for (const auto& c : clauses) {
    std::vector<std::string> vars;
    for (const auto& v : field(c, "vars")) vars.push_back(read_string(v, "clause variable"));
    std::vector<AtomText> premises;
    if (c.contains("premises")) {
      for (const auto& p : c.at("premises")) premises.push_back(read_atom(p));
    }
    std::string name = c.contains("name") ? read_string(c.at("name"), "clause name") : "clause " + std::to_string(k);
    spec.clauses.push_back(make_clause(name, std::move(vars), premises, read_atom(field(c, "conclusion"))));
    ++k;
  }
  return spec;
}

Json write_spec(const GMetSpec& spec) {
  if (spec.preset) return Json{{"preset", std::string(to_string(*spec.preset))}};
  Json clauses = Json::array();
  for (const auto& c : spec.clauses) {
    Json premises = Json::array();
    for (const auto& p : c.premises) premises.push_back(write_atom(p, c));
    clauses.push_back(Json{{"name", c.name}, {"vars", c.vars}, {"premises", premises},
                           {"conclusion", write_atom(c.conclusion, c)}});
  }
  return Json{{"name", spec.name}, {"clauses", clauses}};
}

QuantAlgebra read_algebra(const Json& j, const Signature& sig, const Grid& grid) {
  FuzzySpace space = read_space(j, grid);
  const std::size_t n = space.size();
  auto element = [&](const Json& v) {
    auto i = space.index_of(read_string(v, "carrier element"));
    if (!i) bad("'" + v.get<std::string>() + "' is not a carrier element");
    return *i;
  };
  std::map<std::string, std::vector<std::size_t>, std::less<>> tables;
  const Json& ops = j.contains("ops") ? j.at("ops") : Json::object();
  for (const auto& [op, arity] : sig.ops()) {
    if (!ops.contains(op)) bad("no table for operation '" + op + "'");
    const Json& t = ops.at(op);
    std::vector<std::size_t> table;
    if (arity == 0) {
      table.push_back(element(t));
    } else {
      if (!t.is_object()) bad("table for '" + op + "' must be an object keyed by argument tuples");
      std::vector<std::size_t> args(static_cast<std::size_t>(arity), 0);
      if (n > 0) {
        do {
          std::string key;
          for (std::size_t i = 0; i < args.size(); ++i) key += (i ? "," : "") + space.name(args[i]);
          if (!t.contains(key)) bad("table for '" + op + "' has no entry for '" + key + "'");
          table.push_back(element(t.at(key)));
        } while (advance(args, n));
      }
    }
    tables.emplace(op, std::move(table));
  }
  return QuantAlgebra(sig, std::move(space), std::move(tables));
}

Json write_algebra(const QuantAlgebra& alg) {
  Json out = write_space(alg.space());
  Json ops = Json::object();
  const std::size_t n = alg.size();
  for (const auto& [op, arity] : alg.signature().ops()) {
    const auto& table = alg.table(op);
    if (arity == 0) {
      ops[op] = alg.space().name(table[0]);
      continue;
    }
    Json t = Json::object();
    std::vector<std::size_t> args(static_cast<std::size_t>(arity), 0);
    std::size_t slot = 0;
    if (n > 0) {
      do {
        std::string key;
        for (std::size_t i = 0; i < args.size(); ++i) key += (i ? "," : "") + alg.space().name(args[i]);
        t[key] = alg.space().name(table[slot++]);
      } while (advance(args, n));
    }
    ops[op] = std::move(t);
  }
  out["ops"] = std::move(ops);
  return out;
}

Judgment read_judgment(const Json& j, const Signature& sig, const Grid& grid, const Json* spaces) {
  const Json& ctx = field(j, "context");
  FuzzySpace context;
  if (ctx.is_string()) {
    std::string name = ctx.get<std::string>();
    if (!spaces || !spaces->contains(name)) throw Error(ErrorKind::UnresolvedName, "no space named '" + name + "'");
    context = read_space(spaces->at(name), grid);
  } else {
    context = read_space(ctx, grid);
  }
  Term lhs = parse_term(read_string(field(j, "lhs"), "lhs"), sig);
  Term rhs = parse_term(read_string(field(j, "rhs"), "rhs"), sig);
  for (const Term* t : {&lhs, &rhs}) {
    for (const auto& v : variables(*t)) {
      if (!context.index_of(v)) throw Error(ErrorKind::UnknownVariable, "'" + v + "' is not in the judgment context");
    }
  }
  std::optional<Rational> eps;
  if (j.contains("eps") && !j.at("eps").is_null()) eps = read_value(j.at("eps"), grid);
  return Judgment{std::move(context), std::move(lhs), std::move(rhs), eps};
}

Json write_judgment(const Judgment& j) {
  Json out{{"context", write_space(j.context)}, {"lhs", to_string(j.lhs)}, {"rhs", to_string(j.rhs)}};
  if (j.eps) out["eps"] = write_value(*j.eps);
  return out;
}

Theory read_theory(const Json& j, const Signature& sig, const Grid& grid, const Json* spaces) {
  Theory theory;
  const Json* list = &j;
  if (j.is_object()) {
    if (j.contains("name")) theory.name = read_string(j.at("name"), "theory name");
    list = &field(j, "judgments");
  }
  if (!list->is_array()) bad("theory must be a list of judgments");
  for (const auto& item : *list) theory.judgments.push_back(read_judgment(item, sig, grid, spaces));
  return theory;
}

Json write_fact(const Fact& f) {
  Json out{{"lhs", to_string(f.lhs)}, {"rhs", to_string(f.rhs)}};
  if (f.eps) out["eps"] = write_value(*f.eps);
  return out;
}

Json write_derivation(const Derivation& d) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const ProofStep& s = d.steps[i];
    Json step{{"id", i}, {"rule", std::string(to_string(s.rule))}};
    if (!s.label.empty()) step["label"] = s.label;
    if (!s.binding.empty()) {
      Json b = Json::array();
      for (const auto& t : s.binding) b.push_back(to_string(t));
      step["binding"] = std::move(b);
    }
    if (!s.params.empty()) {
      Json p = Json::array();
      for (const auto& v : s.params) p.push_back(write_value(v));
      step["params"] = std::move(p);
    }
    step["premises"] = s.premises;
    step["conclusion"] = write_fact(s.conclusion);
    steps.push_back(std::move(step));
  }
  return steps;
}

Json write_free(const FreeAlgebra& f) {
  Json classes = Json::array();
  for (const auto& r : f.representatives()) classes.push_back(to_string(r));
  Json delta = Json::array();
  for (std::size_t a = 0; a < f.size(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < f.size(); ++b) row.push_back(write_value(f.delta(a, b)));
    delta.push_back(std::move(row));
  }
  Json ops = Json::object();
  std::size_t overflow = 0;
  for (const auto& [op, table] : f.optables()) {
    const auto arity = static_cast<std::size_t>(*f.signature().arity(op));
    Json t = Json::object();
    std::vector<std::size_t> args(arity, 0);
    std::size_t slot = 0;
    if (arity == 0 || f.size() > 0) {
      do {
        std::string key;
        for (std::size_t i = 0; i < arity; ++i) key += (i ? "," : "") + to_string(f.representative(args[i]));
        const ClassRef& c = table[slot++];
        if (!c) ++overflow;
        t[key] = c ? Json(to_string(f.representative(*c))) : Json("overflow");
      } while (advance(args, f.size()));
    }
    ops[op] = std::move(t);
  }
  Json unit = Json::object();
  for (std::size_t i = 0; i < f.base().size(); ++i) unit[f.base().name(i)] = to_string(f.representative(f.unit()[i]));
  return Json{{"grid", f.grid().denominator()}, {"depth", f.depth()},      {"classes", classes},
              {"delta", delta},                 {"ops", ops},              {"unit", unit},
              {"skipped_overflow", overflow}};
}

Json write_law(const LawReport& r) {
  Json out{{"law", r.law}, {"checked", r.checked}, {"skipped_overflow", r.skipped_overflow}, {"failed", r.failed}};
  out["first_failure"] = r.first_failure ? Json(*r.first_failure) : Json(nullptr);
  return out;
}

Json write_model_report(const ModelCheckReport& r) {
  Json out{{"checked", r.checked}, {"skipped_overflow", r.skipped_overflow}, {"failed", r.failed}};
  out["first_failure"] = r.first_failure ? Json(*r.first_failure) : Json(nullptr);
  return out;
}

}  // namespace qeq::io

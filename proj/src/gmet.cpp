#include "qeqlog/gmet.hpp"

#include <cctype>
#include <set>

#include "qeqlog/error.hpp"

namespace qeq {

FuzzySpace::FuzzySpace(std::vector<std::string> carrier, std::vector<Rational> dist)
    : carrier_(std::move(carrier)), dist_(std::move(dist)) {
  if (dist_.size() != carrier_.size() * carrier_.size()) {
    throw Error(ErrorKind::InvalidArgument, "distance table is not carrier x carrier");
  }
  std::set<std::string> seen;
  for (const auto& name : carrier_) {
    if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty carrier element name");
    if (!seen.insert(name).second) throw Error(ErrorKind::InvalidArgument, "duplicate carrier element '" + name + "'");
  }
  for (const auto& v : dist_) {
    if (v < Rational(0) || v > Rational(1)) throw Error(ErrorKind::InvalidArgument, "distance outside [0,1]");
  }
}

FuzzySpace FuzzySpace::uniform(std::vector<std::string> carrier, Rational off, Rational self) {
  const std::size_t n = carrier.size();
  std::vector<Rational> dist(n * n, off);
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = self;
  return FuzzySpace(std::move(carrier), std::move(dist));
}

std::optional<std::size_t> FuzzySpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < carrier_.size(); ++i) {
    if (carrier_[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<int> FuzzySpace::steps(const Grid& grid) const {
  std::vector<int> out;
  out.reserve(dist_.size());
  for (const auto& v : dist_) out.push_back(grid.steps(v));
  return out;
}

int EpsExpr::eval(const Grid& grid, std::span<const int> params) const {
  int v = 0;
  switch (kind) {
    case Kind::Const: v = grid.steps(value); break;
    case Kind::Param: v = params[param]; break;
    case Kind::Sum: v = operands[0].eval(grid, params) + operands[1].eval(grid, params); break;
    case Kind::Min1: v = operands[0].eval(grid, params); break;
  }
  return std::min(v, grid.top());
}

bool EpsExpr::has_params() const {
  if (kind == Kind::Param) return true;
  return std::any_of(operands.begin(), operands.end(), [](const EpsExpr& e) { return e.has_params(); });
}

void EpsExpr::collect_params(std::vector<bool>& out) const {
  if (kind == Kind::Param) out[param] = true;
  for (const auto& e : operands) e.collect_params(out);
}

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, std::vector<std::string>& params) : text_(text), params_(params) {}

  EpsExpr parse() {
    EpsExpr e = sum();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ParseError, "bound expression '" + std::string(text_) + "': " + why);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  EpsExpr sum() {
    EpsExpr lhs = primary();
    while (eat('+')) {
      EpsExpr e;
      e.kind = EpsExpr::Kind::Sum;
      e.operands.push_back(std::move(lhs));
      e.operands.push_back(primary());
      lhs = std::move(e);
    }
    return lhs;
  }

  static bool is_one(const EpsExpr& e) { return e.kind == EpsExpr::Kind::Const && e.value == Rational(1); }

  EpsExpr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '/' || text_[pos_] == '.')) {
        ++pos_;
      }
      EpsExpr e;
      e.value = Rational::parse(text_.substr(start, pos_ - start));
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\'')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == "min" && eat('(')) {
        EpsExpr a = sum();
        if (!eat(',')) fail("expected ','");
        EpsExpr b = sum();
        if (!eat(')')) fail("expected ')'");
        EpsExpr e;
        e.kind = EpsExpr::Kind::Min1;
        if (is_one(a)) {
          e.operands.push_back(std::move(b));
        } else if (is_one(b)) {
          e.operands.push_back(std::move(a));
        } else {
          fail("min is only supported against the constant 1");
        }
        return e;
      }
      EpsExpr e;
      e.kind = EpsExpr::Kind::Param;
      auto it = std::find(params_.begin(), params_.end(), name);
      e.param = static_cast<std::size_t>(it - params_.begin());
      if (it == params_.end()) params_.push_back(name);
      return e;
    }
    if (eat('(')) {
      EpsExpr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected character");
  }

  std::string_view text_;
  std::vector<std::string>& params_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

EpsExpr parse_eps_expr(std::string_view text, std::vector<std::string>& params) {
  return ExprParser(text, params).parse();
}

std::string to_string(const EpsExpr& e, std::span<const std::string> params) {
  switch (e.kind) {
    case EpsExpr::Kind::Const: return e.value.to_string();
    case EpsExpr::Kind::Param: return params[e.param];
    case EpsExpr::Kind::Sum: return to_string(e.operands[0], params) + "+" + to_string(e.operands[1], params);
    case EpsExpr::Kind::Min1: return "min(1," + to_string(e.operands[0], params) + ")";
  }
  return {};
}

AtomText parse_atom(std::string_view text) {
  std::string s = trim(text);
  if (s.rfind("d(", 0) == 0) {
    auto close = s.find(')');
    auto comma = s.find(',');
    auto le = s.find("<=", close == std::string::npos ? 0 : close);
    if (close == std::string::npos || comma == std::string::npos || comma > close || le == std::string::npos) {
      throw Error(ErrorKind::ParseError, "bad distance atom '" + s + "'");
    }
    return AtomText{false, trim(s.substr(2, comma - 2)), trim(s.substr(comma + 1, close - comma - 1)),
                    trim(s.substr(le + 2))};
  }
  auto eq = s.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "bad atom '" + s + "'");
  return AtomText{true, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), {}};
}

HornClause make_clause(std::string name, std::vector<std::string> vars, const std::vector<AtomText>& premises,
                       const AtomText& conclusion) {
  HornClause c;
  c.name = std::move(name);
  c.vars = std::move(vars);
  auto var_index = [&](const std::string& v) {
    auto it = std::find(c.vars.begin(), c.vars.end(), v);
    if (it == c.vars.end()) {
      throw Error(ErrorKind::InvalidArgument, "clause '" + c.name + "' uses undeclared variable '" + v + "'");
    }
    return static_cast<std::size_t>(it - c.vars.begin());
  };
  auto build = [&](const AtomText& t) {
    Atom a;
    a.kind = t.eq ? Atom::Kind::Eq : Atom::Kind::Dist;
    a.lhs = var_index(t.lhs);
    a.rhs = var_index(t.rhs);
    if (!t.eq) a.bound = parse_eps_expr(t.bound, c.params);
    return a;
  };
  for (const auto& p : premises) c.premises.push_back(build(p));
  c.conclusion = build(conclusion);
  for (const auto& p : c.params) {
    if (std::find(c.vars.begin(), c.vars.end(), p) != c.vars.end()) {
      throw Error(ErrorKind::InvalidArgument, "clause '" + c.name + "' uses '" + p + "' as both variable and parameter");
    }
  }
  return c;
}

std::string to_string(const HornClause& c) {
  auto atom = [&](const Atom& a) {
    if (a.kind == Atom::Kind::Eq) return c.vars[a.lhs] + "=" + c.vars[a.rhs];
    return "d(" + c.vars[a.lhs] + "," + c.vars[a.rhs] + ")<=" + to_string(a.bound, c.params);
  };
  std::string out;
  for (std::size_t i = 0; i < c.premises.size(); ++i) {
    if (i) out += " & ";
    out += atom(c.premises[i]);
  }
  if (!c.premises.empty()) out += " => ";
  return out + atom(c.conclusion);
}

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::FRel: return "FREL";
    case Preset::PMet: return "PMET";
    case Preset::Met: return "MET";
  }
  return {};
}

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "FREL") return Preset::FRel;
  if (name == "PMET") return Preset::PMet;
  if (name == "MET") return Preset::Met;
  return std::nullopt;
}

GMetSpec GMetSpec::frel() { return GMetSpec{"FREL", {}, Preset::FRel}; }

GMetSpec GMetSpec::pmet() {
  GMetSpec s{"PMET", {}, Preset::PMet};
  s.clauses.push_back(make_clause("reflexivity", {"x"}, {}, parse_atom("d(x,x) <= 0")));
  s.clauses.push_back(make_clause("symmetry", {"x", "y"}, {parse_atom("d(x,y) <= e")}, parse_atom("d(y,x) <= e")));
  s.clauses.push_back(make_clause("triangle inequality", {"x", "y", "z"},
                                  {parse_atom("d(x,y) <= e1"), parse_atom("d(y,z) <= e2")},
                                  parse_atom("d(x,z) <= min(1,e1+e2)")));
  return s;
}

GMetSpec GMetSpec::met() {
  GMetSpec s = pmet();
  s.name = "MET";
  s.preset = Preset::Met;
  s.clauses.push_back(make_clause("distance zero implies equality", {"x", "y"}, {parse_atom("d(x,y) <= 0")},
                                  parse_atom("x = y")));
  s.clauses.push_back(make_clause("equality implies distance zero", {"x", "y"}, {parse_atom("x = y")},
                                  parse_atom("d(x,y) <= 0")));
  return s;
}

GMetSpec GMetSpec::of(Preset p) {
  switch (p) {
    case Preset::FRel: return frel();
    case Preset::PMet: return pmet();
    case Preset::Met: return met();
  }
  return frel();
}

std::vector<Violation> check_space(const GMetSpec& spec, const FuzzySpace& sp, const Grid& grid) {
  const std::vector<int> d = sp.steps(grid);
  const std::size_t n = sp.size();
  std::vector<Violation> out;
  for (const auto& c : spec.clauses) {
    for_each_firing(
        c, n, grid, [](std::size_t i, std::size_t j) { return i == j; },
        [&](std::size_t i, std::size_t j) { return d[i * n + j]; },
        [&](std::span<const std::size_t> a, std::span<const int> params) {
          const Atom& g = c.conclusion;
          bool holds = g.kind == Atom::Kind::Eq ? a[g.lhs] == a[g.rhs]
                                                : d[a[g.lhs] * n + a[g.rhs]] <= g.bound.eval(grid, params);
          if (holds) return;
          Violation v{c.name, {}, {}};
          for (auto i : a) v.assignment.push_back(sp.name(i));
          for (auto p : params) v.params.push_back(grid.value(p));
          out.push_back(std::move(v));
        });
  }
  return out;
}

void require_space(const GMetSpec& spec, const FuzzySpace& sp, const Grid& grid, std::string_view what) {
  auto violations = check_space(spec, sp, grid);
  if (violations.empty()) return;
  const auto& v = violations.front();
  std::string where;
  for (std::size_t i = 0; i < v.assignment.size(); ++i) where += (i ? "," : "") + v.assignment[i];
  throw Error(ErrorKind::SpecViolation, std::string(what) + " is not a " + spec.name + " space: clause '" +
                                            v.clause + "' fails at (" + where + ")");
}

bool is_nonexpansive(const Map& f, const FuzzySpace& src, const FuzzySpace& dst) {
  if (f.size() != src.size()) return false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (f[i] >= dst.size()) return false;
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < src.size(); ++j) {
      if (dst.d(f[i], f[j]) > src.d(i, j)) return false;
    }
  }
  return true;
}

void for_each_nonexpansive(const FuzzySpace& src, const FuzzySpace& dst, std::size_t budget,
                           const std::function<bool(const Map&)>& visit) {
  const std::size_t n = src.size();
  const std::size_t m = dst.size();
  if (bounded_power(m, n, budget) > budget) {
    throw Error(ErrorKind::BudgetExceeded, "interpretation count " + std::to_string(m) + "^" + std::to_string(n) +
                                               " exceeds budget " + std::to_string(budget));
  }
  if (n == 0) {
    visit(Map{});
    return;
  }
  if (m == 0) return;
  // Depth-first over src positions; a prefix is extended only while it stays nonexpansive.
  Map f(n, 0);
  std::size_t pos = 0;
  std::vector<std::size_t> next(n, 0);
  while (true) {
    if (next[pos] == m) {
      if (pos == 0) return;
      next[pos] = 0;
      --pos;
      continue;
    }
    f[pos] = next[pos]++;
    bool ok = true;
    for (std::size_t j = 0; j <= pos && ok; ++j) {
      ok = dst.d(f[pos], f[j]) <= src.d(pos, j) && dst.d(f[j], f[pos]) <= src.d(j, pos);
    }
    if (!ok) continue;
    if (pos + 1 == n) {
      if (!visit(f)) return;
    } else {
      ++pos;
    }
  }
}

std::vector<Map> enumerate_nonexpansive(const FuzzySpace& src, const FuzzySpace& dst, std::size_t budget) {
  std::vector<Map> out;
  for_each_nonexpansive(src, dst, budget, [&](const Map& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

FuzzySpace discrete_lift(const GMetSpec& spec, const FuzzySpace& sp, int n) {
  if (!spec.preset) {
    throw Error(ErrorKind::UnsupportedPreset, "no discrete lifting is known for user-defined spec '" + spec.name + "'");
  }
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "lifting arity must be positive");
  std::vector<std::string> names;
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  if (sp.size() > 0) {
    do {
      std::string name = "(";
      for (std::size_t i = 0; i < digits.size(); ++i) name += (i ? "," : "") + sp.name(digits[i]);
      names.push_back(name + ")");
    } while (advance(digits, sp.size()));
  }
  if (*spec.preset == Preset::FRel) return FuzzySpace::uniform(std::move(names), Rational(1), Rational(1));
  return FuzzySpace::uniform(std::move(names), Rational(1), Rational(0));
}

}  // namespace qeq

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qeqlog/odometer.hpp"
#include "qeqlog/rational.hpp"

namespace qeq {

inline constexpr std::size_t kDefaultInterpretationBudget = 1'000'000;

/// Finite carrier with a total distance table (row-major, carrier x carrier).
class FuzzySpace {
 public:
  FuzzySpace() = default;
  FuzzySpace(std::vector<std::string> carrier, std::vector<Rational> dist);

  /// Every pair at `off`, every point at `self`.
  static FuzzySpace uniform(std::vector<std::string> carrier, Rational off, Rational self = Rational(0));

  std::size_t size() const { return carrier_.size(); }
  const std::vector<std::string>& carrier() const { return carrier_; }
  const std::string& name(std::size_t i) const { return carrier_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const Rational& d(std::size_t i, std::size_t j) const { return dist_[i * carrier_.size() + j]; }
  void set_d(std::size_t i, std::size_t j, Rational value) { dist_[i * carrier_.size() + j] = value; }

  /// Distance table in grid steps. Throws GridMismatch.
  std::vector<int> steps(const Grid& grid) const;

  friend bool operator==(const FuzzySpace&, const FuzzySpace&) = default;

 private:
  std::vector<std::string> carrier_;
  std::vector<Rational> dist_;
};

/// A function between finite carriers, by index.
using Map = std::vector<std::size_t>;

/// Bound expression of a distance atom: grid constants, clause parameters,
/// sums and min(., 1). Evaluation clamps at 1.
struct EpsExpr {
  enum class Kind { Const, Param, Sum, Min1 };

  Kind kind = Kind::Const;
  Rational value;
  std::size_t param = 0;
  std::vector<EpsExpr> operands;

  int eval(const Grid& grid, std::span<const int> params) const;
  bool has_params() const;
  void collect_params(std::vector<bool>& out) const;
};

/// Parses e.g. "e", "1/2", "min(1,e1+e2)". New parameter names are appended to `params`.
EpsExpr parse_eps_expr(std::string_view text, std::vector<std::string>& params);
std::string to_string(const EpsExpr& e, std::span<const std::string> params);

struct Atom {
  enum class Kind { Eq, Dist };

  Kind kind = Kind::Eq;
  std::size_t lhs = 0;  // clause variable indices
  std::size_t rhs = 0;
  EpsExpr bound;
};

/// Textual form of an atom: Eq(lhs, rhs) or Dist(lhs, rhs, bound).
struct AtomText {
  bool eq = true;
  std::string lhs;
  std::string rhs;
  std::string bound;
};

/// Reads "x = y" or "d(x,y) <= e".
AtomText parse_atom(std::string_view text);

/// forall vars. premises => conclusion, parameters ranging over the grid.
struct HornClause {
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::string> params;
  std::vector<Atom> premises;
  Atom conclusion;
};

HornClause make_clause(std::string name, std::vector<std::string> vars,
                       const std::vector<AtomText>& premises, const AtomText& conclusion);
std::string to_string(const HornClause& c);

enum class Preset { FRel, PMet, Met };

std::string_view to_string(Preset p);
std::optional<Preset> parse_preset(std::string_view name);

struct GMetSpec {
  std::string name;
  std::vector<HornClause> clauses;
  std::optional<Preset> preset;

  static GMetSpec frel();
  static GMetSpec pmet();
  static GMetSpec met();
  static GMetSpec of(Preset p);
};

struct Violation {
  std::string clause;
  std::vector<std::string> assignment;  // clause variable -> carrier element
  std::vector<Rational> params;
};

/// Every clause instance whose premises hold but whose conclusion fails.
/// Throws GridMismatch when a distance is off the grid.
std::vector<Violation> check_space(const GMetSpec& spec, const FuzzySpace& sp, const Grid& grid);

/// Throws SpecViolation naming `what` when check_space reports anything.
void require_space(const GMetSpec& spec, const FuzzySpace& sp, const Grid& grid, std::string_view what);

bool is_nonexpansive(const Map& f, const FuzzySpace& src, const FuzzySpace& dst);

/// Visits the nonexpansive maps src -> dst in lexicographic order. Throws
/// BudgetExceeded when |dst|^|src| exceeds `budget`. Returning false from
/// `visit` stops the enumeration.
void for_each_nonexpansive(const FuzzySpace& src, const FuzzySpace& dst, std::size_t budget,
                           const std::function<bool(const Map&)>& visit);

std::vector<Map> enumerate_nonexpansive(const FuzzySpace& src, const FuzzySpace& dst,
                                        std::size_t budget = kDefaultInterpretationBudget);

/// Carrier of n-tuples ("(a,b)") with the preset's discrete distance. Only the
/// FRel/PMet/Met presets have a known lifting; other specs throw UnsupportedPreset.
FuzzySpace discrete_lift(const GMetSpec& spec, const FuzzySpace& sp, int n);

/// Enumerates the clause instances over a domain of `domain` points whose
/// premises hold, each with the least parameter values that satisfy them.
/// Parameters occurring only as a bare premise bound are pinned to the largest
/// matching distance; parameters inside compound premise bounds are swept
/// upward from that value; the rest stay at 0. Because bounds are monotone in
/// the parameters, these instances have the strongest conclusions.
/// `eq(i, j)` and `dist(i, j)` (grid steps) read the current state.
/// Returns the number of variable assignments examined.
template <class EqFn, class DistFn, class Visit>
std::size_t for_each_firing(const HornClause& c, std::size_t domain, const Grid& grid, EqFn&& eq,
                            DistFn&& dist, Visit&& visit) {
  const std::size_t k = c.vars.size();
  if (k > 0 && domain == 0) return 0;

  std::vector<bool> swept(c.params.size(), false);
  for (const auto& p : c.premises) {
    if (p.kind == Atom::Kind::Dist && p.bound.kind != EpsExpr::Kind::Param) p.bound.collect_params(swept);
  }
  std::vector<std::size_t> swept_ids;
  for (std::size_t i = 0; i < swept.size(); ++i) {
    if (swept[i]) swept_ids.push_back(i);
  }

  std::vector<std::size_t> a(k, 0);
  std::vector<int> params(c.params.size(), 0);
  std::vector<int> lower(c.params.size(), 0);
  std::size_t examined = 0;
  auto compound_hold = [&] {
    for (const auto& p : c.premises) {
      if (p.kind != Atom::Kind::Dist || p.bound.kind == EpsExpr::Kind::Param) continue;
      if (dist(a[p.lhs], a[p.rhs]) > p.bound.eval(grid, params)) return false;
    }
    return true;
  };
  do {
    ++examined;
    bool ok = true;
    std::fill(lower.begin(), lower.end(), 0);
    for (const auto& p : c.premises) {
      if (p.kind == Atom::Kind::Eq) {
        if (!eq(a[p.lhs], a[p.rhs])) {
          ok = false;
          break;
        }
      } else if (p.bound.kind == EpsExpr::Kind::Param) {
        lower[p.bound.param] = std::max(lower[p.bound.param], dist(a[p.lhs], a[p.rhs]));
      }
    }
    if (!ok) continue;
    params = lower;
    if (swept_ids.empty()) {
      if (compound_hold()) visit(std::span<const std::size_t>(a), std::span<const int>(params));
      continue;
    }
    for (bool more = true; more;) {
      if (compound_hold()) visit(std::span<const std::size_t>(a), std::span<const int>(params));
      more = false;
      for (std::size_t pos = swept_ids.size(); pos-- > 0;) {
        auto id = swept_ids[pos];
        if (params[id] < grid.top()) {
          ++params[id];
          more = true;
          break;
        }
        params[id] = lower[id];
      }
    }
  } while (advance(a, domain));
  return examined;
}

}  // namespace qeq

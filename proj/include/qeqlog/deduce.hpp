#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qeqlog/gmet.hpp"
#include "qeqlog/qalg.hpp"
#include "qeqlog/terms.hpp"

namespace qeq {

inline constexpr std::size_t kDefaultInstanceBudget = 50'000'000;

enum class Rule { Init, Cong, Subst, UseVar, Max, OneMax, Horn, LCong, RCong, Refl, Symm, Trans };

std::string_view to_string(Rule r);

/// An equation or quantitative equation over the target space of a DB.
struct Fact {
  Term lhs;
  Term rhs;
  std::optional<Rational> eps;

  friend bool operator==(const Fact&, const Fact&) = default;
};

std::string to_string(const Fact& f);

/// One rule instance. Premises refer to earlier steps of the same derivation.
struct ProofStep {
  Rule rule = Rule::Refl;
  std::string label;              // clause name for Horn, axiom number for Init/Subst
  std::size_t axiom = 0;          // Init, Subst: index into the theory
  std::size_t clause = 0;         // Horn: index into the clause list
  std::vector<Term> binding;      // Subst: image of each context element; Horn: of each clause variable
  std::vector<Rational> params;   // Horn parameter values
  std::vector<std::size_t> premises;
  Fact conclusion;
};

/// A derivation as a list of steps; the last step concludes the queried fact.
/// Shared subderivations appear once.
struct Derivation {
  std::vector<ProofStep> steps;

  const Fact& conclusion() const { return steps.back().conclusion; }
  /// Rule tags in step order.
  std::vector<Rule> rules() const;
};

struct SaturationOptions {
  int depth = 2;
  Grid grid{};
  std::size_t instance_budget = kDefaultInstanceBudget;
};

/// Saturated derivability over a bounded term universe: the classes of derivable
/// equality and, per pair of classes, the least derivable distance bound.
class DerivationDB {
 public:
  const Signature& signature() const { return sig_; }
  const Theory& theory() const { return theory_; }
  const GMetSpec& spec() const { return spec_; }
  const FuzzySpace& target() const { return target_; }
  const Grid& grid() const { return grid_; }
  int depth() const { return universe_.depth(); }
  const Universe& universe() const { return universe_; }

  /// Index of `t` in the universe; throws OutOfUniverse.
  std::size_t index_of(const Term& t) const;
  /// Class id of a term index (the index of the class's union-find root).
  std::size_t root(std::size_t term) const { return roots_[term]; }
  bool same_class(std::size_t s, std::size_t t) const { return roots_[s] == roots_[t]; }
  /// Least derivable bound between the classes of two term indices, in grid steps.
  int distance_steps(std::size_t s, std::size_t t) const { return dmin_[roots_[s] * n_ + roots_[t]]; }
  /// Class ids in increasing order.
  std::vector<std::size_t> class_ids() const;
  std::size_t num_classes() const { return class_ids().size(); }

  /// Number of merges plus strict distance decreases performed.
  std::size_t productive_steps() const { return productive_; }
  std::size_t rounds() const { return rounds_; }

 private:
  friend class Saturator;
  friend class TraceBuilder;
  friend DerivationDB saturate(const Signature&, const Theory&, const GMetSpec&, const FuzzySpace&,
                               const SaturationOptions&);

  struct PremiseRef {
    bool is_eq;
    std::size_t lhs;
    std::size_t rhs;
    int eps;
    std::int64_t justification;  // distance event in force when used, -1 for 1-Max
  };
  struct Event {
    Rule rule;
    std::size_t detail;  // axiom or clause index
    std::vector<std::size_t> binding;
    std::vector<int> params;
    std::vector<PremiseRef> premises;
    bool is_eq;
    std::size_t lhs;
    std::size_t rhs;
    int eps;
  };

  DerivationDB(Signature sig, Theory theory, GMetSpec spec, FuzzySpace target, Grid grid, Universe universe);

  Signature sig_;
  Theory theory_;
  GMetSpec spec_;
  FuzzySpace target_;
  Grid grid_;
  Universe universe_;
  std::size_t n_;
  std::vector<std::size_t> roots_;
  std::vector<int> dmin_;
  std::vector<std::int64_t> dist_event_;
  std::vector<std::size_t> proof_parent_;
  std::vector<std::int64_t> proof_edge_;
  std::vector<Event> events_;
  std::size_t productive_ = 0;
  std::size_t rounds_ = 0;
};

/// Least fixpoint of the deduction rules over the terms of depth <= options.depth
/// built from the target carrier. Rule instances are only generated when every
/// term they mention is in the universe, so the result is sound and grows
/// monotonically with the depth.
/// Throws SpecViolation, TrivialPair, GridMismatch, BudgetExceeded.
DerivationDB saturate(const Signature& sig, const Theory& theory, const GMetSpec& spec, const FuzzySpace& target,
                      const SaturationOptions& options = {});

/// Throws PreconditionViolation when the judgment's context is not the target,
/// OutOfUniverse when a side is not in the universe.
bool derives(const DerivationDB& db, const Judgment& j);

Rational distance(const DerivationDB& db, const Term& s, const Term& t);

/// Throws UnknownFact when the fact is not derivable in the DB.
Derivation trace(const DerivationDB& db, const Fact& fact);

/// forall X_eps. op(x1..xn) =_eps op(y1..yn) for each grid eps, where
/// d(xi,yi) = d(yi,xi) = eps, points are at distance 0 from themselves and
/// every other pair is at distance 1. For eps = 0 the context identifies
/// distinct points, so it is only a valid context for specs without
/// "distance zero implies equality".
Theory gen_nonexpansive_axioms(const Signature& sig, const std::string& op, const Grid& grid);

}  // namespace qeq

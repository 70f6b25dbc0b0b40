#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qeqlog/gmet.hpp"
#include "qeqlog/terms.hpp"

namespace qeq {

/// Sigma-algebra on a fuzzy space. Operations are total tables and need not be
/// nonexpansive.
class QuantAlgebra {
 public:
  /// `tables[op]` is indexed by the mixed-radix encoding of the argument tuple
  /// (first argument most significant); nullary ops have one entry.
  QuantAlgebra(Signature sig, FuzzySpace space, std::map<std::string, std::vector<std::size_t>, std::less<>> tables);

  const Signature& signature() const { return sig_; }
  const FuzzySpace& space() const { return space_; }
  std::size_t size() const { return space_.size(); }
  const std::vector<std::size_t>& table(std::string_view op) const;

  std::size_t apply(std::string_view op, std::span<const std::size_t> args) const;

  friend bool operator==(const QuantAlgebra&, const QuantAlgebra&) = default;

 private:
  Signature sig_;
  FuzzySpace space_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> tables_;
};

/// Index of an argument tuple in an op table.
std::size_t tuple_index(std::span<const std::size_t> args, std::size_t base);

/// forall context. lhs = rhs (no eps) or lhs =_eps rhs.
struct Judgment {
  FuzzySpace context;
  Term lhs;
  Term rhs;
  std::optional<Rational> eps;

  bool quantitative() const { return eps.has_value(); }
};

std::string to_string(const Judgment& j);

struct Theory {
  std::string name;
  std::vector<Judgment> judgments;
};

/// Interpretation of the context `ctx` in the algebra, by carrier index.
using Interpretation = Map;

std::size_t eval_term(const QuantAlgebra& alg, const std::map<std::string, std::size_t, std::less<>>& tau,
                      const Term& t);
std::size_t eval_term(const QuantAlgebra& alg, const FuzzySpace& ctx, const Interpretation& tau, const Term& t);

struct SatResult {
  bool holds = true;
  std::optional<Interpretation> counterexample;
};

/// Checks the judgment under every nonexpansive interpretation of its context.
/// Throws SpecViolation when the algebra's space or the context fails `spec`.
SatResult satisfies(const QuantAlgebra& alg, const GMetSpec& spec, const Judgment& j, const Grid& grid = Grid{},
                    std::size_t budget = kDefaultInterpretationBudget);

bool is_model(const QuantAlgebra& alg, const GMetSpec& spec, const Theory& theory, const Grid& grid = Grid{},
              std::size_t budget = kDefaultInterpretationBudget);

/// Nonexpansive and commuting with every operation.
bool is_homomorphism(const Map& f, const QuantAlgebra& a, const QuantAlgebra& b);

/// Whether every catalog model of the theory satisfies `j`. This only
/// approximates semantic entailment from above: a finite catalog can miss the
/// model that refutes `j`, so a judgment may be accepted here that is not a
/// consequence of the theory.
bool entails_catalog(std::span<const QuantAlgebra> catalog, const GMetSpec& spec, const Theory& theory,
                     const Judgment& j, const Grid& grid = Grid{},
                     std::size_t budget = kDefaultInterpretationBudget);

}  // namespace qeq

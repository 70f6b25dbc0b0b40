#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qeqlog/deduce.hpp"
#include "qeqlog/qalg.hpp"

namespace qeq {

/// Result of evaluating in a truncated free algebra: a class index, or nullopt
/// (overflow) when the term needed lies beyond the depth bound.
using ClassRef = std::optional<std::size_t>;

/// The depth-truncated free quantitative algebra over a space: classes of
/// derivably equal terms with the least derivable distance between them.
class FreeAlgebra {
 public:
  const DerivationDB& db() const { return *db_; }
  const Theory& theory() const { return db_->theory(); }
  const GMetSpec& spec() const { return db_->spec(); }
  const Signature& signature() const { return db_->signature(); }
  const Grid& grid() const { return db_->grid(); }
  const FuzzySpace& base() const { return db_->target(); }
  int depth() const { return db_->depth(); }

  std::size_t size() const { return reps_.size(); }
  /// Least term of each class in canonical order; classes are numbered in that order.
  const std::vector<Term>& representatives() const { return reps_; }
  const Term& representative(std::size_t c) const { return reps_[c]; }
  /// Class of a universe term index.
  std::size_t class_of_index(std::size_t term) const { return class_of_term_[term]; }
  /// Class of a term; nullopt when the term is outside the universe.
  ClassRef class_of(const Term& t) const;

  Rational delta(std::size_t c1, std::size_t c2) const { return grid().value(delta_[c1 * size() + c2]); }
  int delta_steps(std::size_t c1, std::size_t c2) const { return delta_[c1 * size() + c2]; }

  /// op applied to classes; nullopt marks an overflow entry.
  ClassRef apply(std::string_view op, std::span<const std::size_t> args) const;
  const std::vector<ClassRef>& optable(std::string_view op) const;
  const std::map<std::string, std::vector<ClassRef>, std::less<>>& optables() const { return optables_; }

  /// Class of each base element.
  const Map& unit() const { return unit_; }

  /// The classes as a fuzzy space; element c is named "[representative]".
  const FuzzySpace& space() const { return space_; }

  /// Test hook for negative controls: overwrites one delta entry.
  void corrupt_delta(std::size_t c1, std::size_t c2, int steps);

 private:
  friend FreeAlgebra build_free(const Signature&, const Theory&, const GMetSpec&, const FuzzySpace&,
                                const SaturationOptions&);

  std::shared_ptr<const DerivationDB> db_;
  std::vector<Term> reps_;
  std::vector<std::size_t> class_of_term_;
  std::vector<int> delta_;
  std::map<std::string, std::vector<ClassRef>, std::less<>> optables_;
  Map unit_;
  FuzzySpace space_;
};

FreeAlgebra build_free(const Signature& sig, const Theory& theory, const GMetSpec& spec, const FuzzySpace& base,
                       const SaturationOptions& options = {});

/// Class of sigma_tau(t), where sigma_tau sends each variable to the
/// representative of its class under tau; overflow when that term is deeper
/// than the bound. Variables are looked up by name in `tau`.
ClassRef free_eval(const FreeAlgebra& f, const std::map<std::string, std::size_t, std::less<>>& tau, const Term& t);
ClassRef free_eval(const FreeAlgebra& f, const FuzzySpace& ctx, const Map& tau, const Term& t);

struct ModelCheckReport {
  std::size_t checked = 0;
  std::size_t skipped_overflow = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_failure;
};

/// Checks every theory judgment under every nonexpansive interpretation into
/// the free algebra whose two sides do not overflow.
ModelCheckReport check_free_is_model(const FreeAlgebra& f, std::size_t budget = kDefaultInterpretationBudget);

/// Homomorphic extension of f: base -> B to the classes, by evaluating each
/// representative in B. Throws NotAModel, NotNonexpansive.
Map extend_hom(const FreeAlgebra& f, const QuantAlgebra& b, const Map& generators,
               std::size_t budget = kDefaultInterpretationBudget);

struct UmpReport {
  bool exists = false;
  bool unique = false;
  std::size_t candidates = 0;  // maps examined
  std::size_t witnesses = 0;   // nonexpansive homomorphisms extending f
  std::size_t skipped_overflow = 0;
};

/// Whether g: classes -> B is nonexpansive and commutes with every op entry
/// that does not overflow. Returns the number of overflow entries skipped.
bool is_partial_homomorphism(const Map& g, const FreeAlgebra& f, const QuantAlgebra& b,
                             std::size_t* skipped_overflow = nullptr);

/// Existence through extend_hom; uniqueness by enumerating all |B|^|classes| maps.
/// Throws NotAModel, NotNonexpansive, BudgetExceeded.
UmpReport check_ump(const FreeAlgebra& f, const QuantAlgebra& b, const Map& generators,
                    std::size_t budget = kDefaultInterpretationBudget);

}  // namespace qeq

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qeqlog/free.hpp"

namespace qeq {

/// Partial map between class sets; nullopt entries are overflow.
using PartialMap = std::vector<ClassRef>;

/// The truncated monad M = U F for a fixed signature, theory, spec and depth.
/// Free algebras are built on demand and cached per input space; the cache
/// only grows and may be read from several threads.
class MonadInstance {
 public:
  MonadInstance(Signature sig, Theory theory, GMetSpec spec, SaturationOptions options,
                std::size_t interpretation_budget = kDefaultInterpretationBudget);

  const Signature& signature() const { return sig_; }
  const Theory& theory() const { return theory_; }
  const GMetSpec& spec() const { return spec_; }
  const SaturationOptions& options() const { return options_; }
  std::size_t interpretation_budget() const { return interpretation_budget_; }

  std::shared_ptr<const FreeAlgebra> free(const FuzzySpace& sp) const;
  std::size_t cache_size() const;

 private:
  Signature sig_;
  Theory theory_;
  GMetSpec spec_;
  SaturationOptions options_;
  std::size_t interpretation_budget_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const FreeAlgebra>> cache_;
};

FuzzySpace m_object(const MonadInstance& mi, const FuzzySpace& sp);

/// M(f)([t]) = [f(t)]. Throws NotNonexpansive.
PartialMap m_map(const MonadInstance& mi, const Map& f, const FuzzySpace& src, const FuzzySpace& dst);
/// Same for a partial f: classes whose representative mentions an undefined
/// point overflow.
PartialMap m_map(const MonadInstance& mi, const PartialMap& f, const FuzzySpace& src, const FuzzySpace& dst);

Map m_unit(const MonadInstance& mi, const FuzzySpace& sp);

/// Flattening M(M(sp)) -> M(sp): a term over classes becomes the class of the
/// term obtained by substituting each class's representative; overflow when
/// that term is too deep.
PartialMap m_mult(const MonadInstance& mi, const FuzzySpace& sp);

struct LawReport {
  std::string law;
  std::size_t checked = 0;
  std::size_t skipped_overflow = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_failure;

  bool ok() const { return failed == 0; }
};

/// The maps entering the monad laws at one space.
struct MonadLawData {
  std::shared_ptr<const FreeAlgebra> m1;  // M(sp)
  std::shared_ptr<const FreeAlgebra> m2;  // M(M(sp))
  std::shared_ptr<const FreeAlgebra> m3;  // M(M(M(sp)))
  Map eta_m;       // unit at M(sp):  M -> MM
  PartialMap mu;   // MM -> M
  PartialMap m_eta;  // M(unit):      M -> MM
  PartialMap mu_m;   // mult at M(sp): MMM -> MM
  PartialMap m_mu;   // M(mult):      MMM -> MM
};

MonadLawData monad_law_data(const MonadInstance& mi, const FuzzySpace& sp);

/// mu . eta_M = id, mu . M eta = id and mu . M mu = mu . mu_M, checked
/// pointwise wherever no intermediate overflows.
std::vector<LawReport> check_monad_laws(const MonadLawData& data);
std::vector<LawReport> check_monad_laws(const MonadInstance& mi, const FuzzySpace& sp);

/// A space with a structure map h: M(space) -> space.
struct EMCandidate {
  FuzzySpace space;
  PartialMap h;
};

/// h([t]) = value of t in the algebra under the identity interpretation.
/// Throws NotAModel; throws EMLawViolation if evaluation does not respect the classes.
EMCandidate em_from_model(const MonadInstance& mi, const QuantAlgebra& b);

struct EMReport {
  LawReport unit_law;  // h . eta = id
  LawReport mult_law;  // h . M h = h . mu
  bool nonexpansive = true;

  bool ok() const { return unit_law.ok() && mult_law.ok() && nonexpansive; }
};

EMReport check_em_laws(const MonadInstance& mi, const EMCandidate& cand);

struct InducedModel {
  QuantAlgebra algebra;
  EMReport laws;
  bool is_model;
};

/// op(a1..an) := h([op(a1..an)]). Throws EMLawViolation when the candidate
/// fails its laws or leaves an operation undefined.
InducedModel model_from_em(const MonadInstance& mi, const EMCandidate& cand);

/// Given a homomorphism f: A -> B with a nonexpansive right inverse g and A a
/// model, reports whether B is a model (it always should be). Throws
/// PreconditionViolation naming the first failed hypothesis.
bool check_hom_image_model(const QuantAlgebra& a, const QuantAlgebra& b, const Map& f, const Map& g,
                           const Theory& theory, const GMetSpec& spec, const Grid& grid = Grid{},
                           std::size_t budget = kDefaultInterpretationBudget);

}  // namespace qeq

#include "qeqlog/monad.hpp"

#include "qeqlog/error.hpp"

namespace qeq {

namespace {

std::string cache_key(const FuzzySpace& sp) {
  std::string key;
  for (const auto& name : sp.carrier()) key += name + '\x1f';
  key += '\x1e';
  for (std::size_t i = 0; i < sp.size(); ++i) {
    for (std::size_t j = 0; j < sp.size(); ++j) key += sp.d(i, j).to_string() + ',';
  }
  return key;
}

std::string describe(const FreeAlgebra& f, std::size_t c) { return f.space().name(c); }

}  // namespace

MonadInstance::MonadInstance(Signature sig, Theory theory, GMetSpec spec, SaturationOptions options,
                             std::size_t interpretation_budget)
    : sig_(std::move(sig)),
      theory_(std::move(theory)),
      spec_(std::move(spec)),
      options_(options),
      interpretation_budget_(interpretation_budget) {}

std::shared_ptr<const FreeAlgebra> MonadInstance::free(const FuzzySpace& sp) const {
  std::string key = cache_key(sp);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto built = std::make_shared<const FreeAlgebra>(build_free(sig_, theory_, spec_, sp, options_));
  std::lock_guard lock(mutex_);
  return cache_.emplace(std::move(key), std::move(built)).first->second;
}

std::size_t MonadInstance::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

FuzzySpace m_object(const MonadInstance& mi, const FuzzySpace& sp) { return mi.free(sp)->space(); }

PartialMap m_map(const MonadInstance& mi, const Map& f, const FuzzySpace& src, const FuzzySpace& dst) {
  if (!is_nonexpansive(f, src, dst)) throw Error(ErrorKind::NotNonexpansive, "M(f) needs a nonexpansive f");
  PartialMap partial(f.begin(), f.end());
  return m_map(mi, partial, src, dst);
}

PartialMap m_map(const MonadInstance& mi, const PartialMap& f, const FuzzySpace& src, const FuzzySpace& dst) {
  if (f.size() != src.size()) throw Error(ErrorKind::InvalidArgument, "map is not defined on the source carrier");
  auto from = mi.free(src);
  auto to = mi.free(dst);
  Map tau(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (f[i]) tau[i] = to->unit()[*f[i]];
  }
  PartialMap out;
  out.reserve(from->size());
  for (const auto& rep : from->representatives()) {
    bool defined = true;
    for (const auto& v : variables(rep)) defined = defined && f[*src.index_of(v)].has_value();
    out.push_back(defined ? free_eval(*to, src, tau, rep) : std::nullopt);
  }
  return out;
}

Map m_unit(const MonadInstance& mi, const FuzzySpace& sp) { return mi.free(sp)->unit(); }

PartialMap m_mult(const MonadInstance& mi, const FuzzySpace& sp) {
  auto inner = mi.free(sp);
  auto outer = mi.free(inner->space());
  Map identity(inner->size());
  for (std::size_t c = 0; c < identity.size(); ++c) identity[c] = c;
  PartialMap out;
  out.reserve(outer->size());
  for (const auto& rep : outer->representatives()) out.push_back(free_eval(*inner, inner->space(), identity, rep));
  return out;
}

MonadLawData monad_law_data(const MonadInstance& mi, const FuzzySpace& sp) {
  MonadLawData d;
  d.m1 = mi.free(sp);
  d.m2 = mi.free(d.m1->space());
  d.m3 = mi.free(d.m2->space());
  d.eta_m = d.m2->unit();
  d.mu = m_mult(mi, sp);
  d.m_eta = m_map(mi, d.m1->unit(), sp, d.m1->space());
  d.mu_m = m_mult(mi, d.m1->space());
  d.m_mu = m_map(mi, d.mu, d.m2->space(), d.m1->space());
  return d;
}

std::vector<LawReport> check_monad_laws(const MonadLawData& d) {
  auto compose = [](const PartialMap& g, ClassRef x) -> ClassRef { return x ? g[*x] : std::nullopt; };
  auto record = [](LawReport& r, ClassRef lhs, ClassRef rhs, const std::string& at) {
    if (!lhs || !rhs) {
      ++r.skipped_overflow;
      return;
    }
    ++r.checked;
    if (*lhs != *rhs) {
      ++r.failed;
      if (!r.first_failure) r.first_failure = at;
    }
  };

  LawReport left_unit;
  left_unit.law = "mu . eta_M = id";
  LawReport right_unit;
  right_unit.law = "mu . M(eta) = id";
  for (std::size_t c = 0; c < d.m1->size(); ++c) {
    record(left_unit, compose(d.mu, d.eta_m[c]), c, describe(*d.m1, c));
    record(right_unit, compose(d.mu, d.m_eta[c]), c, describe(*d.m1, c));
  }
  LawReport assoc;
  assoc.law = "mu . M(mu) = mu . mu_M";
  for (std::size_t x = 0; x < d.m3->size(); ++x) {
    record(assoc, compose(d.mu, d.m_mu[x]), compose(d.mu, d.mu_m[x]), describe(*d.m3, x));
  }
  return {left_unit, right_unit, assoc};
}

std::vector<LawReport> check_monad_laws(const MonadInstance& mi, const FuzzySpace& sp) {
  return check_monad_laws(monad_law_data(mi, sp));
}

EMCandidate em_from_model(const MonadInstance& mi, const QuantAlgebra& b) {
  if (!is_model(b, mi.spec(), mi.theory(), mi.options().grid, mi.interpretation_budget())) {
    throw Error(ErrorKind::NotAModel, "algebra does not satisfy the theory");
  }
  auto f = mi.free(b.space());
  Map identity(b.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  EMCandidate cand{b.space(), {}};
  for (const auto& rep : f->representatives()) cand.h.push_back(eval_term(b, b.space(), identity, rep));
  const Universe& u = f->db().universe();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (eval_term(b, b.space(), identity, u.term(i)) != *cand.h[f->class_of_index(i)]) {
      throw Error(ErrorKind::EMLawViolation, "evaluation separates " + to_string(u.term(i)) + " from its class");
    }
  }
  return cand;
}

EMReport check_em_laws(const MonadInstance& mi, const EMCandidate& cand) {
  auto m1 = mi.free(cand.space);
  auto m2 = mi.free(m1->space());
  if (cand.h.size() != m1->size()) throw Error(ErrorKind::InvalidArgument, "structure map has the wrong domain");
  EMReport report;
  report.unit_law.law = "h . eta = id";
  report.mult_law.law = "h . M(h) = h . mu";

  for (std::size_t a = 0; a < cand.space.size(); ++a) {
    const ClassRef& image = cand.h[m1->unit()[a]];
    if (!image) {
      ++report.unit_law.skipped_overflow;
      continue;
    }
    ++report.unit_law.checked;
    if (*image != a) {
      ++report.unit_law.failed;
      if (!report.unit_law.first_failure) report.unit_law.first_failure = cand.space.name(a);
    }
  }

  for (std::size_t c = 0; c < m1->size() && report.nonexpansive; ++c) {
    for (std::size_t e = 0; e < m1->size(); ++e) {
      if (!cand.h[c] || !cand.h[e]) continue;
      if (cand.space.d(*cand.h[c], *cand.h[e]) > m1->delta(c, e)) {
        report.nonexpansive = false;
        break;
      }
    }
  }

  PartialMap mh = m_map(mi, cand.h, m1->space(), cand.space);
  PartialMap mu = m_mult(mi, cand.space);
  for (std::size_t x = 0; x < m2->size(); ++x) {
    ClassRef lhs = mh[x] ? cand.h[*mh[x]] : std::nullopt;
    ClassRef rhs = mu[x] ? cand.h[*mu[x]] : std::nullopt;
    if (!lhs || !rhs) {
      ++report.mult_law.skipped_overflow;
      continue;
    }
    ++report.mult_law.checked;
    if (*lhs != *rhs) {
      ++report.mult_law.failed;
      if (!report.mult_law.first_failure) report.mult_law.first_failure = describe(*m2, x);
    }
  }
  return report;
}

InducedModel model_from_em(const MonadInstance& mi, const EMCandidate& cand) {
  EMReport laws = check_em_laws(mi, cand);
  if (!laws.ok()) {
    std::string why = !laws.unit_law.ok() ? laws.unit_law.law : !laws.mult_law.ok() ? laws.mult_law.law : "nonexpansiveness";
    throw Error(ErrorKind::EMLawViolation, "candidate fails " + why);
  }
  auto m1 = mi.free(cand.space);
  const std::size_t n = cand.space.size();
  std::map<std::string, std::vector<std::size_t>, std::less<>> tables;
  for (const auto& [op, arity] : mi.signature().ops()) {
    std::vector<std::size_t> table;
    std::vector<std::size_t> args(static_cast<std::size_t>(arity), 0);
    if (arity == 0 || n > 0) {
      do {
        std::vector<Term> vars;
        for (auto a : args) vars.push_back(Term::var(cand.space.name(a)));
        ClassRef c = m1->class_of(Term::app(op, std::move(vars)));
        if (!c || !cand.h[*c]) {
          throw Error(ErrorKind::EMLawViolation, "structure map is undefined on an application of '" + op + "'");
        }
        table.push_back(*cand.h[*c]);
      } while (advance(args, n));
    }
    tables.emplace(op, std::move(table));
  }
  QuantAlgebra alg(mi.signature(), cand.space, std::move(tables));
  bool model = is_model(alg, mi.spec(), mi.theory(), mi.options().grid, mi.interpretation_budget());
  return InducedModel{std::move(alg), std::move(laws), model};
}

bool check_hom_image_model(const QuantAlgebra& a, const QuantAlgebra& b, const Map& f, const Map& g,
                           const Theory& theory, const GMetSpec& spec, const Grid& grid, std::size_t budget) {
  if (!is_homomorphism(f, a, b)) throw Error(ErrorKind::PreconditionViolation, "f is not a homomorphism");
  if (!is_nonexpansive(g, b.space(), a.space())) throw Error(ErrorKind::PreconditionViolation, "g is not nonexpansive");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (f[g[i]] != i) throw Error(ErrorKind::PreconditionViolation, "g is not a right inverse of f");
  }
  if (!is_model(a, spec, theory, grid, budget)) throw Error(ErrorKind::PreconditionViolation, "A is not a model");
  return is_model(b, spec, theory, grid, budget);
}

}  // namespace qeq

#include "qeqlog/free.hpp"

#include "qeqlog/error.hpp"

namespace qeq {

ClassRef FreeAlgebra::class_of(const Term& t) const {
  auto i = db_->universe().find(t);
  if (!i) return std::nullopt;
  return class_of_term_[*i];
}

const std::vector<ClassRef>& FreeAlgebra::optable(std::string_view op) const {
  auto it = optables_.find(op);
  if (it == optables_.end()) throw Error(ErrorKind::InvalidArgument, "unknown operation '" + std::string(op) + "'");
  return it->second;
}

ClassRef FreeAlgebra::apply(std::string_view op, std::span<const std::size_t> args) const {
  return optable(op)[tuple_index(args, size())];
}

void FreeAlgebra::corrupt_delta(std::size_t c1, std::size_t c2, int steps) {
  delta_[c1 * size() + c2] = steps;
  space_.set_d(c1, c2, grid().value(steps));
}

FreeAlgebra build_free(const Signature& sig, const Theory& theory, const GMetSpec& spec, const FuzzySpace& base,
                       const SaturationOptions& options) {
  FreeAlgebra f;
  f.db_ = std::make_shared<const DerivationDB>(saturate(sig, theory, spec, base, options));
  const DerivationDB& db = *f.db_;
  const Universe& u = db.universe();

  std::vector<std::size_t> rep_index;  // universe index of each class representative
  std::map<std::size_t, std::size_t> class_of_root;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (class_of_root.emplace(db.root(i), rep_index.size()).second) rep_index.push_back(i);
  }
  for (auto i : rep_index) f.reps_.push_back(u.term(i));
  f.class_of_term_.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) f.class_of_term_[i] = class_of_root.at(db.root(i));

  const std::size_t k = rep_index.size();
  f.delta_.resize(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) f.delta_[a * k + b] = db.distance_steps(rep_index[a], rep_index[b]);
  }

  for (std::size_t op = 0; op < u.op_names().size(); ++op) {
    const auto arity = static_cast<std::size_t>(u.op_arity(op));
    std::vector<ClassRef> table;
    std::vector<std::size_t> args(arity, 0);
    std::vector<std::size_t> terms(arity);
    if (arity == 0 || k > 0) {
      do {
        for (std::size_t i = 0; i < arity; ++i) terms[i] = rep_index[args[i]];
        auto hit = u.find_app(op, terms);
        table.push_back(hit ? ClassRef(f.class_of_term_[*hit]) : std::nullopt);
      } while (advance(args, k));
    }
    f.optables_.emplace(u.op_names()[op], std::move(table));
  }

  for (std::size_t i = 0; i < base.size(); ++i) f.unit_.push_back(f.class_of_term_[u.var_term(i)]);

  std::vector<std::string> names;
  std::vector<Rational> dist;
  for (const auto& r : f.reps_) names.push_back("[" + to_string(r) + "]");
  for (auto v : f.delta_) dist.push_back(db.grid().value(v));
  f.space_ = FuzzySpace(std::move(names), std::move(dist));
  return f;
}

namespace {

template <class Lookup>
std::optional<std::size_t> substituted_index(const FreeAlgebra& f, const Term& t, Lookup&& lookup) {
  const Universe& u = f.db().universe();
  if (t.is_var()) {
    std::size_t c = lookup(t.head());
    if (c >= f.size()) throw Error(ErrorKind::InvalidArgument, "class index out of range");
    return u.find(f.representative(c));
  }
  std::vector<std::size_t> args;
  for (const auto& a : t.args()) {
    auto i = substituted_index(f, a, lookup);
    if (!i) return std::nullopt;
    args.push_back(*i);
  }
  auto op = u.op_index(t.head());
  if (!op) throw Error(ErrorKind::InvalidArgument, "unknown operation '" + t.head() + "'");
  return u.find_app(*op, args);
}

}  // namespace

ClassRef free_eval(const FreeAlgebra& f, const std::map<std::string, std::size_t, std::less<>>& tau, const Term& t) {
  auto i = substituted_index(f, t, [&](const std::string& name) {
    auto it = tau.find(name);
    if (it == tau.end()) throw Error(ErrorKind::UnknownVariable, "'" + name + "' is not interpreted");
    return it->second;
  });
  if (!i) return std::nullopt;
  return f.class_of_index(*i);
}

ClassRef free_eval(const FreeAlgebra& f, const FuzzySpace& ctx, const Map& tau, const Term& t) {
  auto i = substituted_index(f, t, [&](const std::string& name) {
    auto k = ctx.index_of(name);
    if (!k || *k >= tau.size()) throw Error(ErrorKind::UnknownVariable, "'" + name + "' is not in the context");
    return tau[*k];
  });
  if (!i) return std::nullopt;
  return f.class_of_index(*i);
}

ModelCheckReport check_free_is_model(const FreeAlgebra& f, std::size_t budget) {
  ModelCheckReport report;
  const auto& judgments = f.theory().judgments;
  for (std::size_t k = 0; k < judgments.size(); ++k) {
    const Judgment& j = judgments[k];
    std::optional<int> eps;
    if (j.eps) eps = f.grid().steps(*j.eps);
    for_each_nonexpansive(j.context, f.space(), budget, [&](const Map& tau) {
      auto l = free_eval(f, j.context, tau, j.lhs);
      auto r = free_eval(f, j.context, tau, j.rhs);
      if (!l || !r) {
        ++report.skipped_overflow;
        return true;
      }
      ++report.checked;
      bool ok = eps ? f.delta_steps(*l, *r) <= *eps : *l == *r;
      if (!ok) {
        ++report.failed;
        if (!report.first_failure) {
          std::string where;
          for (std::size_t i = 0; i < tau.size(); ++i) {
            where += (i ? ", " : "") + j.context.name(i) + " -> " + f.space().name(tau[i]);
          }
          report.first_failure = "axiom " + std::to_string(k) + " under {" + where + "}";
        }
      }
      return true;
    });
  }
  return report;
}

Map extend_hom(const FreeAlgebra& f, const QuantAlgebra& b, const Map& generators, std::size_t budget) {
  if (!is_model(b, f.spec(), f.theory(), f.grid(), budget)) {
    throw Error(ErrorKind::NotAModel, "target algebra does not satisfy the theory");
  }
  if (!is_nonexpansive(generators, f.base(), b.space())) {
    throw Error(ErrorKind::NotNonexpansive, "generator map is not nonexpansive");
  }
  Map ext;
  ext.reserve(f.size());
  for (const auto& rep : f.representatives()) ext.push_back(eval_term(b, f.base(), generators, rep));
  return ext;
}

bool is_partial_homomorphism(const Map& g, const FreeAlgebra& f, const QuantAlgebra& b,
                             std::size_t* skipped_overflow) {
  if (!is_nonexpansive(g, f.space(), b.space())) return false;
  std::size_t skipped = 0;
  const std::size_t k = f.size();
  for (const auto& [op, arity] : f.signature().ops()) {
    const auto& table = f.optable(op);
    std::vector<std::size_t> args(static_cast<std::size_t>(arity), 0);
    std::vector<std::size_t> image(args.size());
    if (arity > 0 && k == 0) continue;
    std::size_t slot = 0;
    do {
      const ClassRef& entry = table[slot++];
      if (!entry) {
        ++skipped;
        continue;
      }
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = g[args[i]];
      if (g[*entry] != b.apply(op, image)) return false;
    } while (advance(args, k));
  }
  if (skipped_overflow) *skipped_overflow = skipped;
  return true;
}

UmpReport check_ump(const FreeAlgebra& f, const QuantAlgebra& b, const Map& generators, std::size_t budget) {
  UmpReport report;
  Map ext = extend_hom(f, b, generators, budget);
  auto extends = [&](const Map& g) {
    for (std::size_t i = 0; i < f.unit().size(); ++i) {
      if (g[f.unit()[i]] != generators[i]) return false;
    }
    return true;
  };
  report.exists = is_partial_homomorphism(ext, f, b, &report.skipped_overflow) && extends(ext);

  const std::size_t k = f.size();
  if (bounded_power(b.size(), k, budget) > budget) {
    throw Error(ErrorKind::BudgetExceeded, "candidate count " + std::to_string(b.size()) + "^" + std::to_string(k) +
                                               " exceeds budget " + std::to_string(budget));
  }
  Map g(k, 0);
  if (b.size() > 0 || k == 0) {
    do {
      ++report.candidates;
      if (extends(g) && is_partial_homomorphism(g, f, b)) ++report.witnesses;
    } while (advance(g, b.size()));
  }
  report.unique = report.witnesses == 1;
  return report;
}

}  // namespace qeq

#include "qeqlog/qalg.hpp"

#include "qeqlog/error.hpp"

namespace qeq {

std::size_t tuple_index(std::span<const std::size_t> args, std::size_t base) {
  std::size_t idx = 0;
  for (auto a : args) idx = idx * base + a;
  return idx;
}

QuantAlgebra::QuantAlgebra(Signature sig, FuzzySpace space,
                           std::map<std::string, std::vector<std::size_t>, std::less<>> tables)
    : sig_(std::move(sig)), space_(std::move(space)), tables_(std::move(tables)) {
  const std::size_t n = space_.size();
  for (const auto& [op, arity] : sig_.ops()) {
    auto it = tables_.find(op);
    if (it == tables_.end()) throw Error(ErrorKind::InvalidArgument, "missing table for '" + op + "'");
    std::size_t expected = bounded_power(n, static_cast<std::size_t>(arity), SIZE_MAX - 1);
    if (it->second.size() != expected) {
      throw Error(ErrorKind::InvalidArgument, "table for '" + op + "' has the wrong size");
    }
    for (auto v : it->second) {
      if (v >= n) throw Error(ErrorKind::InvalidArgument, "table for '" + op + "' leaves the carrier");
    }
  }
  if (tables_.size() != sig_.ops().size()) {
    throw Error(ErrorKind::InvalidArgument, "table for a symbol outside the signature");
  }
}

const std::vector<std::size_t>& QuantAlgebra::table(std::string_view op) const {
  auto it = tables_.find(op);
  if (it == tables_.end()) throw Error(ErrorKind::InvalidArgument, "unknown operation '" + std::string(op) + "'");
  return it->second;
}

std::size_t QuantAlgebra::apply(std::string_view op, std::span<const std::size_t> args) const {
  return table(op)[tuple_index(args, space_.size())];
}

std::string to_string(const Judgment& j) {
  std::string ctx = "{";
  for (std::size_t i = 0; i < j.context.size(); ++i) ctx += (i ? "," : "") + j.context.name(i);
  ctx += "}";
  std::string rel = j.eps ? "=_" + j.eps->to_string() : "=";
  return "forall " + ctx + ". " + to_string(j.lhs) + " " + rel + " " + to_string(j.rhs);
}

namespace {

template <class Lookup>
std::size_t eval_with(const QuantAlgebra& alg, const Term& t, Lookup&& lookup) {
  if (t.is_var()) return lookup(t.head());
  std::vector<std::size_t> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval_with(alg, a, lookup));
  return alg.apply(t.head(), args);
}

}  // namespace

std::size_t eval_term(const QuantAlgebra& alg, const std::map<std::string, std::size_t, std::less<>>& tau,
                      const Term& t) {
  return eval_with(alg, t, [&](const std::string& name) {
    auto it = tau.find(name);
    if (it == tau.end()) throw Error(ErrorKind::UnknownVariable, "'" + name + "' is not interpreted");
    return it->second;
  });
}

std::size_t eval_term(const QuantAlgebra& alg, const FuzzySpace& ctx, const Interpretation& tau, const Term& t) {
  return eval_with(alg, t, [&](const std::string& name) {
    auto i = ctx.index_of(name);
    if (!i || *i >= tau.size()) throw Error(ErrorKind::UnknownVariable, "'" + name + "' is not in the context");
    return tau[*i];
  });
}

SatResult satisfies(const QuantAlgebra& alg, const GMetSpec& spec, const Judgment& j, const Grid& grid,
                    std::size_t budget) {
  require_space(spec, alg.space(), grid, "algebra carrier");
  require_space(spec, j.context, grid, "judgment context");
  if (j.eps && !grid.contains(*j.eps)) {
    throw Error(ErrorKind::GridMismatch, j.eps->to_string() + " is not on the grid");
  }
  SatResult result;
  for_each_nonexpansive(j.context, alg.space(), budget, [&](const Map& tau) {
    std::size_t l = eval_term(alg, j.context, tau, j.lhs);
    std::size_t r = eval_term(alg, j.context, tau, j.rhs);
    bool ok = j.eps ? alg.space().d(l, r) <= *j.eps : l == r;
    if (ok) return true;
    result.holds = false;
    result.counterexample = tau;
    return false;
  });
  return result;
}

bool is_model(const QuantAlgebra& alg, const GMetSpec& spec, const Theory& theory, const Grid& grid,
              std::size_t budget) {
  require_space(spec, alg.space(), grid, "algebra carrier");
  for (const auto& j : theory.judgments) {
    if (!satisfies(alg, spec, j, grid, budget).holds) return false;
  }
  return true;
}

bool is_homomorphism(const Map& f, const QuantAlgebra& a, const QuantAlgebra& b) {
  if (!is_nonexpansive(f, a.space(), b.space())) return false;
  const std::size_t n = a.size();
  for (const auto& [op, arity] : a.signature().ops()) {
    if (b.signature().arity(op) != arity) return false;
    std::vector<std::size_t> args(static_cast<std::size_t>(arity), 0);
    std::vector<std::size_t> image(args.size());
    if (arity > 0 && n == 0) continue;
    do {
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = f[args[i]];
      if (f[a.apply(op, args)] != b.apply(op, image)) return false;
    } while (advance(args, n));
  }
  return true;
}

bool entails_catalog(std::span<const QuantAlgebra> catalog, const GMetSpec& spec, const Theory& theory,
                     const Judgment& j, const Grid& grid, std::size_t budget) {
  for (const auto& alg : catalog) {
    if (is_model(alg, spec, theory, grid, budget) && !satisfies(alg, spec, j, grid, budget).holds) return false;
  }
  return true;
}

}  // namespace qeq

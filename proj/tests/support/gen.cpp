#include "support/gen.hpp"

#include <algorithm>
#include <cstdint>

namespace qeq::testing {

std::vector<std::string> names(std::size_t n, const std::string& prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(prefix.empty() ? std::string(1, static_cast<char>('a' + i)) : prefix + std::to_string(i));
  }
  return out;
}

FuzzySpace random_met_space(Rng& rng, std::size_t n, const Grid& grid, const std::string& prefix) {
  const int top = grid.top();
  std::uniform_int_distribution<int> step(1, top);
  std::vector<int> d(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = step(rng);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    }
  }
  std::vector<Rational> dist;
  for (int v : d) dist.push_back(grid.value(v));
  return FuzzySpace(names(n, prefix), std::move(dist));
}

QuantAlgebra random_algebra(Rng& rng, const Signature& sig, std::size_t n, const Grid& grid,
                            const std::string& prefix) {
  FuzzySpace sp = random_met_space(rng, n, grid, prefix);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::map<std::string, std::vector<std::size_t>, std::less<>> tables;
  for (const auto& [op, arity] : sig.ops()) {
    std::vector<std::size_t> t(bounded_power(n, static_cast<std::size_t>(arity), SIZE_MAX - 1));
    for (auto& v : t) v = pick(rng);
    tables.emplace(op, std::move(t));
  }
  return QuantAlgebra(sig, std::move(sp), std::move(tables));
}

Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& vars, int depth) {
  std::vector<std::pair<std::string, int>> ops(sig.ops().begin(), sig.ops().end());
  std::uniform_int_distribution<std::size_t> any(0, vars.size() + ops.size() - 1);
  std::size_t k = any(rng);
  if (depth <= 1) {
    // Leaves only: variables and constants.
    std::vector<Term> leaves;
    for (const auto& v : vars) leaves.push_back(Term::var(v));
    for (const auto& [op, ar] : ops) {
      if (ar == 0) leaves.push_back(Term::app(op));
    }
    std::uniform_int_distribution<std::size_t> leaf(0, leaves.size() - 1);
    return leaves[leaf(rng)];
  }
  if (k < vars.size()) return Term::var(vars[k]);
  const auto& [op, arity] = ops[k - vars.size()];
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, sig, vars, depth - 1));
  return Term::app(op, std::move(args));
}

Theory random_theory_for(Rng& rng, const QuantAlgebra& seed, const GMetSpec& spec, const Grid& grid,
                         std::size_t count, int term_depth) {
  Theory theory{"random", {}};
  std::uniform_int_distribution<std::size_t> ctx_size(1, 2);
  std::uniform_int_distribution<int> eps_step(0, grid.top());
  std::bernoulli_distribution quantitative(0.6);
  for (std::size_t attempt = 0; theory.judgments.size() < count && attempt < 200 * count; ++attempt) {
    FuzzySpace ctx = random_met_space(rng, ctx_size(rng), grid, "x");
    Term lhs = random_term(rng, seed.signature(), ctx.carrier(), term_depth);
    Term rhs = random_term(rng, seed.signature(), ctx.carrier(), term_depth);
    if (lhs == rhs) continue;
    std::optional<Rational> eps;
    if (quantitative(rng)) eps = grid.value(eps_step(rng));
    Judgment j{std::move(ctx), lhs, rhs, eps};
    if (satisfies(seed, spec, j, grid).holds) theory.judgments.push_back(std::move(j));
  }
  return theory;
}

std::vector<Signature> sample_signatures() {
  Signature u;
  u.add("u", 1);
  Signature uc;
  uc.add("u", 1);
  uc.add("c", 0);
  Signature f;
  f.add("f", 2);
  return {u, uc, f};
}

int safe_depth(const Signature& sig, std::size_t carrier, int wanted) {
  for (int d = wanted; d > 1; --d) {
    // Terms of depth <= k, counted level by level.
    std::size_t total = carrier;
    for (const auto& [op, ar] : sig.ops()) {
      if (ar == 0) ++total;
    }
    for (int k = 2; k <= d && total <= 40; ++k) {
      std::size_t next = carrier;
      for (const auto& [op, ar] : sig.ops()) next += bounded_power(total, static_cast<std::size_t>(ar), 1000);
      total = next;
    }
    if (total <= 40) return d;
  }
  return 1;
}

}  // namespace qeq::testing

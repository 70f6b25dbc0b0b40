#include "support/oracle.hpp"

#include <stdexcept>

namespace qeq::testing {

namespace {

int clamp_eval(const EpsExpr& e, const Grid& grid, const std::vector<int>& params) {
  return e.eval(grid, params);
}

}  // namespace

SaturationOracle::SaturationOracle(const Signature& sig, const Theory& theory, const GMetSpec& spec,
                                   const FuzzySpace& target, int depth, const Grid& grid) {
  build_terms(sig, target.carrier(), depth);
  const std::size_t n = size();
  const int top = grid.top();
  eq_.assign(n * n, 0);
  dist_.assign(n * n, top);  // 1-Max
  for (std::size_t i = 0; i < n; ++i) eq_[i * n + i] = 1;  // reflexivity of =

  const auto target_steps = target.steps(grid);
  const std::size_t m = target.size();

  bool changed = true;
  while (changed) {
    changed = false;
    ++rounds_;

    // Symmetry and transitivity of =.
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (equal(i, k) && equal(k, j)) changed |= set_eq(i, j);
          if (equal(j, i)) changed |= set_eq(i, j);
        }
      }
    }

    // Congruence of operations.
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        const Term& s = terms_[p];
        const Term& t = terms_[q];
        if (s.is_var() || t.is_var() || s.head() != t.head()) continue;
        bool all = true;
        for (std::size_t i = 0; i < s.args().size() && all; ++i) {
          all = equal(index(s.args()[i]), index(t.args()[i]));
        }
        if (all) changed |= set_eq(p, q);
      }
    }

    // Left and right congruence of distances.
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (!equal(s, t)) continue;
        for (std::size_t u = 0; u < n; ++u) {
          changed |= set_dist(s, u, dist(t, u));
          changed |= set_dist(u, s, dist(u, t));
        }
      }
    }

    // Use variables.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        changed |= set_dist(index(Term::var(target.name(i))), index(Term::var(target.name(j))),
                            target_steps[i * m + j]);
      }
    }

    // Axioms, both as stated (when the context is the target) and substituted.
    for (const auto& ax : theory.judgments) {
      const std::size_t k = ax.context.size();
      const auto ctx = ax.context.steps(grid);
      const int eps = ax.eps ? grid.steps(*ax.eps) : 0;
      auto add = [&](const Term& s, const Term& t) {
        auto i = lookup(s);
        auto j = lookup(t);
        if (!i || !j) return;
        changed |= ax.eps ? set_dist(*i, *j, eps) : set_eq(*i, *j);
      };
      if (ax.context == target) add(ax.lhs, ax.rhs);
      std::vector<std::size_t> sigma(k, 0);
      do {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
          for (std::size_t j = 0; j < k && ok; ++j) ok = dist(sigma[i], sigma[j]) <= ctx[i * k + j];
        }
        if (!ok) continue;
        Substitution sub;
        for (std::size_t i = 0; i < k; ++i) sub.emplace(ax.context.name(i), terms_[sigma[i]]);
        add(apply_subst(sub, ax.lhs), apply_subst(sub, ax.rhs));
      } while (k > 0 && advance(sigma, n));
    }

    // Every constraint clause, over every term assignment and parameter vector.
    for (const auto& c : spec.clauses) {
      std::vector<std::size_t> a(c.vars.size(), 0);
      do {
        std::vector<std::size_t> pv(c.params.size(), 0);
        do {
          std::vector<int> params(pv.begin(), pv.end());
          bool hold = true;
          for (const auto& p : c.premises) {
            hold = p.kind == Atom::Kind::Eq ? equal(a[p.lhs], a[p.rhs])
                                            : dist(a[p.lhs], a[p.rhs]) <= clamp_eval(p.bound, grid, params);
            if (!hold) break;
          }
          if (!hold) continue;
          const Atom& g = c.conclusion;
          changed |= g.kind == Atom::Kind::Eq ? set_eq(a[g.lhs], a[g.rhs])
                                              : set_dist(a[g.lhs], a[g.rhs], clamp_eval(g.bound, grid, params));
        } while (!pv.empty() && advance(pv, static_cast<std::size_t>(top) + 1));
      } while (!a.empty() && advance(a, n));
    }
  }
}

void SaturationOracle::build_terms(const Signature& sig, const std::vector<std::string>& carrier, int depth) {
  // Level by level: level k holds the terms of depth exactly k.
  std::vector<std::vector<Term>> levels(static_cast<std::size_t>(depth) + 1);
  for (int k = 1; k <= depth; ++k) {
    auto& level = levels[static_cast<std::size_t>(k)];
    if (k == 1) {
      for (const auto& x : carrier) level.push_back(Term::var(x));
    }
    for (const auto& [op, arity] : sig.ops()) {
      if (arity == 0) {
        if (k == 1) level.push_back(Term::app(op));
        continue;
      }
      std::vector<Term> below;
      for (int j = 1; j < k; ++j) {
        for (const auto& t : levels[static_cast<std::size_t>(j)]) below.push_back(t);
      }
      if (below.empty()) continue;
      std::vector<std::size_t> pick(static_cast<std::size_t>(arity), 0);
      do {
        std::vector<Term> args;
        int deepest = 0;
        for (auto i : pick) {
          args.push_back(below[i]);
          deepest = std::max(deepest, below[i].depth());
        }
        if (deepest == k - 1) level.push_back(Term::app(op, std::move(args)));
      } while (advance(pick, below.size()));
    }
  }
  for (const auto& level : levels) {
    for (const auto& t : level) {
      by_text_.emplace(to_string(t), terms_.size());
      terms_.push_back(t);
    }
  }
}

std::optional<std::size_t> SaturationOracle::lookup(const Term& t) const {
  auto it = by_text_.find(to_string(t));
  if (it == by_text_.end()) return std::nullopt;
  return it->second;
}

std::size_t SaturationOracle::index(const Term& t) const {
  auto i = lookup(t);
  if (!i) throw std::out_of_range("oracle: term outside the universe: " + to_string(t));
  return *i;
}

bool SaturationOracle::set_eq(std::size_t s, std::size_t t) {
  char& e = eq_[s * size() + t];
  if (e) return false;
  e = 1;
  return true;
}

bool SaturationOracle::set_dist(std::size_t s, std::size_t t, int k) {
  int& d = dist_[s * size() + t];
  if (k >= d) return false;
  d = k;
  return true;
}

std::vector<std::string> compare_with_oracle(const DerivationDB& db, const SaturationOracle& oracle) {
  std::vector<std::string> out;
  const auto& u = db.universe();
  if (u.size() != oracle.size()) {
    out.push_back("universe sizes differ: " + std::to_string(u.size()) + " vs " + std::to_string(oracle.size()));
    return out;
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      const std::size_t oi = oracle.index(u.term(i)), oj = oracle.index(u.term(j));
      const std::string pair = to_string(u.term(i)) + ", " + to_string(u.term(j));
      if (db.same_class(i, j) != oracle.equal(oi, oj)) out.push_back("equality differs at " + pair);
      if (db.distance_steps(i, j) != oracle.dist(oi, oj)) {
        out.push_back("distance differs at " + pair + ": " + std::to_string(db.distance_steps(i, j)) + " vs " +
                      std::to_string(oracle.dist(oi, oj)));
      }
    }
  }
  return out;
}

namespace {

bool is_eq_fact(const Fact& f, const Term& s, const Term& t) { return !f.eps && f.lhs == s && f.rhs == t; }

}  // namespace

std::string replay(const Derivation& d, const DerivationDB& db) {
  const Grid& grid = db.grid();
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const ProofStep& st = d.steps[i];
    const Fact& c = st.conclusion;
    auto fail = [&](const std::string& why) {
      return "step " + std::to_string(i) + " (" + std::string(to_string(st.rule)) + ", " + to_string(c) + "): " + why;
    };
    for (auto p : st.premises) {
      if (p >= i) return fail("premise does not precede the step");
    }
    auto prem = [&](std::size_t k) -> const Fact& { return d.steps[st.premises[k]].conclusion; };
    auto arity = [&](std::size_t k) { return st.premises.size() == k; };
    if (c.eps && !grid.contains(*c.eps)) return fail("bound off the grid");
    if (!db.universe().find(c.lhs) || !db.universe().find(c.rhs)) return fail("term outside the universe");

    switch (st.rule) {
      case Rule::Refl:
        if (!arity(0) || c.eps || !(c.lhs == c.rhs)) return fail("not s = s");
        break;
      case Rule::Symm:
        if (!arity(1) || c.eps || !is_eq_fact(prem(0), c.rhs, c.lhs)) return fail("premise is not t = s");
        break;
      case Rule::Trans:
        if (!arity(2) || c.eps || prem(0).eps || prem(1).eps || !(prem(0).lhs == c.lhs) ||
            !(prem(0).rhs == prem(1).lhs) || !(prem(1).rhs == c.rhs)) {
          return fail("premises do not chain");
        }
        break;
      case Rule::LCong:
        if (!arity(2) || !c.eps || !is_eq_fact(prem(0), c.lhs, prem(1).lhs) || !prem(1).eps ||
            !(prem(1).rhs == c.rhs) || !(*prem(1).eps == *c.eps)) {
          return fail("not s = s', s' =e t / s =e t");
        }
        break;
      case Rule::RCong:
        if (!arity(2) || !c.eps || !is_eq_fact(prem(0), prem(1).rhs, c.rhs) || !prem(1).eps ||
            !(prem(1).lhs == c.lhs) || !(*prem(1).eps == *c.eps)) {
          return fail("not t = t', s =e t / s =e t'");
        }
        break;
      case Rule::Max:
        if (!arity(1) || !c.eps || !prem(0).eps || !(prem(0).lhs == c.lhs) || !(prem(0).rhs == c.rhs) ||
            *prem(0).eps > *c.eps) {
          return fail("not a weakening");
        }
        break;
      case Rule::OneMax:
        if (!arity(0) || !c.eps || !(*c.eps == Rational(1))) return fail("not s =1 t");
        break;
      case Rule::UseVar: {
        if (!arity(0) || !c.eps || !c.lhs.is_var() || !c.rhs.is_var()) return fail("not between points");
        auto i1 = db.target().index_of(c.lhs.head());
        auto i2 = db.target().index_of(c.rhs.head());
        if (!i1 || !i2 || !(db.target().d(*i1, *i2) == *c.eps)) return fail("bound is not the target distance");
        break;
      }
      case Rule::Init: {
        if (!arity(0) || st.axiom >= db.theory().judgments.size()) return fail("bad axiom");
        const Judgment& ax = db.theory().judgments[st.axiom];
        if (!(ax.context == db.target()) || !(ax.lhs == c.lhs) || !(ax.rhs == c.rhs) || ax.eps != c.eps) {
          return fail("conclusion is not the axiom over the target");
        }
        break;
      }
      case Rule::Cong: {
        if (c.eps || c.lhs.is_var() || c.rhs.is_var() || c.lhs.head() != c.rhs.head()) return fail("not f(..) = f(..)");
        const auto la = c.lhs.args(), ra = c.rhs.args();
        if (la.size() != ra.size() || !arity(la.size())) return fail("wrong number of premises");
        for (std::size_t k = 0; k < la.size(); ++k) {
          if (!is_eq_fact(prem(k), la[k], ra[k])) return fail("argument premise mismatch");
        }
        break;
      }
      case Rule::Subst: {
        if (st.axiom >= db.theory().judgments.size()) return fail("bad axiom");
        const Judgment& ax = db.theory().judgments[st.axiom];
        const std::size_t k = ax.context.size();
        if (st.binding.size() != k || !arity(k * k)) return fail("binding or premise count mismatch");
        Substitution sub;
        for (std::size_t x = 0; x < k; ++x) sub.emplace(ax.context.name(x), st.binding[x]);
        for (std::size_t x = 0; x < k; ++x) {
          for (std::size_t y = 0; y < k; ++y) {
            const Fact& p = prem(x * k + y);
            if (!p.eps || !(p.lhs == st.binding[x]) || !(p.rhs == st.binding[y]) || *p.eps > ax.context.d(x, y)) {
              return fail("premise does not establish the context distance");
            }
          }
        }
        if (!(apply_subst(sub, ax.lhs) == c.lhs) || !(apply_subst(sub, ax.rhs) == c.rhs) || ax.eps != c.eps) {
          return fail("conclusion is not the substituted axiom");
        }
        break;
      }
      case Rule::Horn: {
        if (st.clause >= db.spec().clauses.size()) return fail("bad clause");
        const HornClause& h = db.spec().clauses[st.clause];
        if (st.binding.size() != h.vars.size() || st.params.size() != h.params.size() || !arity(h.premises.size())) {
          return fail("binding, parameter or premise count mismatch");
        }
        std::vector<int> params;
        for (const auto& p : st.params) params.push_back(grid.steps(p));
        auto matches = [&](const Atom& a, const Fact& f) {
          if (!(f.lhs == st.binding[a.lhs]) || !(f.rhs == st.binding[a.rhs])) return false;
          if (a.kind == Atom::Kind::Eq) return !f.eps.has_value();
          return f.eps && grid.steps(*f.eps) == a.bound.eval(grid, params);
        };
        for (std::size_t k = 0; k < h.premises.size(); ++k) {
          if (!matches(h.premises[k], prem(k))) return fail("premise is not the clause premise");
        }
        if (!matches(h.conclusion, c)) return fail("conclusion is not the clause conclusion");
        break;
      }
    }
  }
  return {};
}

}  // namespace qeq::testing

#include "qeqlog/deduce.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "qeqlog/error.hpp"

namespace qeq {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}  // namespace

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Init: return "INIT";
    case Rule::Cong: return "CONG";
    case Rule::Subst: return "SUBST";
    case Rule::UseVar: return "USEVAR";
    case Rule::Max: return "MAX";
    case Rule::OneMax: return "ONEMAX";
    case Rule::Horn: return "HORN";
    case Rule::LCong: return "LCONG";
    case Rule::RCong: return "RCONG";
    case Rule::Refl: return "REFL";
    case Rule::Symm: return "SYMM";
    case Rule::Trans: return "TRANS";
  }
  return {};
}

std::string to_string(const Fact& f) {
  std::string rel = f.eps ? "=_" + f.eps->to_string() : "=";
  return to_string(f.lhs) + " " + rel + " " + to_string(f.rhs);
}

std::vector<Rule> Derivation::rules() const {
  std::vector<Rule> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.rule);
  return out;
}

DerivationDB::DerivationDB(Signature sig, Theory theory, GMetSpec spec, FuzzySpace target, Grid grid,
                           Universe universe)
    : sig_(std::move(sig)),
      theory_(std::move(theory)),
      spec_(std::move(spec)),
      target_(std::move(target)),
      grid_(grid),
      universe_(std::move(universe)),
      n_(universe_.size()),
      roots_(n_),
      dmin_(n_ * n_, grid_.top()),
      dist_event_(n_ * n_, -1),
      proof_parent_(n_, kNone),
      proof_edge_(n_, -1) {
  for (std::size_t i = 0; i < n_; ++i) roots_[i] = i;
}

std::size_t DerivationDB::index_of(const Term& t) const {
  auto i = universe_.find(t);
  if (!i) {
    throw Error(ErrorKind::OutOfUniverse,
                to_string(t) + " is not among the terms of depth <= " + std::to_string(depth()));
  }
  return *i;
}

std::vector<std::size_t> DerivationDB::class_ids() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i) {
    if (roots_[i] == i) out.push_back(i);
  }
  return out;
}

/// Runs the rules to a fixpoint. Each productive step merges two classes or
/// strictly lowers one distance entry, so the loop terminates.
class Saturator {
 public:
  Saturator(DerivationDB& db, std::size_t budget) : db_(db), n_(db.n_), budget_(budget) {}

  void run() {
    prepare_axioms();
    bool first = true;
    do {
      changed_ = false;
      ++db_.rounds_;
      horn_pass();
      if (first) {
        use_variables();
        init_axioms();
        first = false;
      }
      substitution_pass();
      congruence_pass();
    } while (changed_);
    for (std::size_t i = 0; i < n_; ++i) db_.roots_[i] = find(i);
  }

 private:
  using Event = DerivationDB::Event;
  using PremiseRef = DerivationDB::PremiseRef;

  // Axiom term compiled against its context: variable nodes hold a context index.
  struct Pattern {
    bool is_var;
    std::size_t symbol;
    std::vector<Pattern> args;
  };
  struct Axiom {
    std::size_t index;
    Pattern lhs;
    Pattern rhs;
    std::vector<int> context_dist;
    std::size_t context_size;
    std::optional<int> eps;
    bool over_target;
  };

  std::size_t find(std::size_t x) {
    auto& p = db_.roots_;
    while (p[x] != x) {
      p[x] = p[p[x]];
      x = p[x];
    }
    return x;
  }

  int& dmin(std::size_t r1, std::size_t r2) { return db_.dmin_[r1 * n_ + r2]; }
  std::int64_t& dist_event(std::size_t r1, std::size_t r2) { return db_.dist_event_[r1 * n_ + r2]; }
  int current(std::size_t s, std::size_t t) { return dmin(find(s), find(t)); }

  PremiseRef eq_premise(std::size_t s, std::size_t t) { return PremiseRef{true, s, t, 0, -1}; }
  PremiseRef dist_premise(std::size_t s, std::size_t t, int eps) {
    return PremiseRef{false, s, t, eps, dist_event(find(s), find(t))};
  }

  void charge(std::size_t instances) {
    spent_ += instances;
    if (spent_ > budget_) {
      throw Error(ErrorKind::BudgetExceeded,
                  "saturation examined more than " + std::to_string(budget_) + " rule instances");
    }
  }

  std::int64_t record(Event e) {
    db_.events_.push_back(std::move(e));
    ++db_.productive_;
    changed_ = true;
    return static_cast<std::int64_t>(db_.events_.size() - 1);
  }

  void lower(Event e) {
    std::size_t r1 = find(e.lhs), r2 = find(e.rhs);
    if (e.eps >= dmin(r1, r2)) return;
    int eps = e.eps;
    auto id = record(std::move(e));
    dmin(r1, r2) = eps;
    dist_event(r1, r2) = id;
  }

  void reroot(std::size_t x) {
    std::size_t prev = kNone;
    std::int64_t prev_edge = -1;
    while (x != kNone) {
      std::size_t next = db_.proof_parent_[x];
      std::int64_t edge = db_.proof_edge_[x];
      db_.proof_parent_[x] = prev;
      db_.proof_edge_[x] = prev_edge;
      prev = x;
      prev_edge = edge;
      x = next;
    }
  }

  void merge(Event e) {
    std::size_t r1 = find(e.lhs), r2 = find(e.rhs);
    if (r1 == r2) return;
    std::size_t s = e.lhs, t = e.rhs;
    auto id = record(std::move(e));
    reroot(s);
    db_.proof_parent_[s] = t;
    db_.proof_edge_[s] = id;

    std::size_t keep = std::min(r1, r2), gone = std::max(r1, r2);
    db_.roots_[gone] = keep;
    // Left and right congruence: the merged class inherits the better bound of either side.
    for (std::size_t u = 0; u < n_; ++u) {
      if (dmin(gone, u) < dmin(keep, u)) {
        dmin(keep, u) = dmin(gone, u);
        dist_event(keep, u) = dist_event(gone, u);
      }
    }
    for (std::size_t u = 0; u < n_; ++u) {
      if (dmin(u, gone) < dmin(u, keep)) {
        dmin(u, keep) = dmin(u, gone);
        dist_event(u, keep) = dist_event(u, gone);
      }
    }
  }

  Pattern compile(const Term& t, const FuzzySpace& ctx) {
    if (t.is_var()) {
      auto i = ctx.index_of(t.head());
      if (!i) throw Error(ErrorKind::UnknownVariable, "'" + t.head() + "' is not in the axiom context");
      return Pattern{true, *i, {}};
    }
    auto op = db_.universe_.op_index(t.head());
    if (!op) throw Error(ErrorKind::InvalidArgument, "unknown operation '" + t.head() + "'");
    Pattern p{false, *op, {}};
    for (const auto& a : t.args()) p.args.push_back(compile(a, ctx));
    return p;
  }

  void prepare_axioms() {
    const auto& judgments = db_.theory_.judgments;
    for (std::size_t k = 0; k < judgments.size(); ++k) {
      const Judgment& j = judgments[k];
      require_space(db_.spec_, j.context, db_.grid_, "context of axiom " + std::to_string(k));
      validate(j.lhs, db_.sig_);
      validate(j.rhs, db_.sig_);
      Axiom ax{k, compile(j.lhs, j.context), compile(j.rhs, j.context), j.context.steps(db_.grid_),
               j.context.size(), std::nullopt, j.context == db_.target_};
      if (j.eps) ax.eps = db_.grid_.steps(*j.eps);
      axioms_.push_back(std::move(ax));
    }
  }

  // Universe index of the pattern with context element i replaced by binding[i].
  std::optional<std::size_t> instantiate(const Pattern& p, const std::vector<std::size_t>& binding) {
    if (p.is_var) return binding[p.symbol];
    std::vector<std::size_t> args;
    args.reserve(p.args.size());
    for (const auto& a : p.args) {
      auto i = instantiate(a, binding);
      if (!i) return std::nullopt;
      args.push_back(*i);
    }
    return db_.universe_.find_app(p.symbol, args);
  }

  void conclude(Rule rule, std::size_t detail, std::vector<std::size_t> binding, std::vector<int> params,
                std::vector<PremiseRef> premises, bool is_eq, std::size_t lhs, std::size_t rhs, int eps) {
    Event e{rule, detail, std::move(binding), std::move(params), std::move(premises), is_eq, lhs, rhs, eps};
    if (is_eq) {
      merge(std::move(e));
    } else {
      lower(std::move(e));
    }
  }

  bool productive(bool is_eq, std::size_t lhs, std::size_t rhs, int eps) {
    if (is_eq) return find(lhs) != find(rhs);
    return eps < current(lhs, rhs);
  }

  void use_variables() {
    const auto d = db_.target_.steps(db_.grid_);
    const std::size_t m = db_.target_.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t s = db_.universe_.var_term(i), t = db_.universe_.var_term(j);
        if (!productive(false, s, t, d[i * m + j])) continue;
        conclude(Rule::UseVar, 0, {}, {}, {}, false, s, t, d[i * m + j]);
      }
    }
  }

  void init_axioms() {
    std::vector<std::size_t> identity(db_.target_.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = db_.universe_.var_term(i);
    for (const auto& ax : axioms_) {
      if (!ax.over_target) continue;
      auto s = instantiate(ax.lhs, identity);
      auto t = instantiate(ax.rhs, identity);
      if (!s || !t) continue;
      bool is_eq = !ax.eps;
      int eps = ax.eps.value_or(0);
      if (!productive(is_eq, *s, *t, eps)) continue;
      conclude(Rule::Init, ax.index, {}, {}, {}, is_eq, *s, *t, eps);
    }
  }

  std::vector<std::size_t> live_classes() {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (find(i) == i) out.push_back(i);
    }
    return out;
  }

  void horn_pass() {
    for (std::size_t c = 0; c < db_.spec_.clauses.size(); ++c) {
      const HornClause& clause = db_.spec_.clauses[c];
      const auto classes = live_classes();
      charge(bounded_power(classes.size(), clause.vars.size(), budget_));
      for_each_firing(
          clause, classes.size(), db_.grid_,
          [&](std::size_t i, std::size_t j) { return find(classes[i]) == find(classes[j]); },
          [&](std::size_t i, std::size_t j) { return current(classes[i], classes[j]); },
          [&](std::span<const std::size_t> a, std::span<const int> params) {
            const Atom& g = clause.conclusion;
            std::size_t lhs = classes[a[g.lhs]], rhs = classes[a[g.rhs]];
            bool is_eq = g.kind == Atom::Kind::Eq;
            int eps = is_eq ? 0 : g.bound.eval(db_.grid_, params);
            if (!productive(is_eq, lhs, rhs, eps)) return;
            std::vector<std::size_t> binding;
            for (auto i : a) binding.push_back(classes[i]);
            std::vector<PremiseRef> premises;
            for (const auto& p : clause.premises) {
              std::size_t x = classes[a[p.lhs]], y = classes[a[p.rhs]];
              premises.push_back(p.kind == Atom::Kind::Eq ? eq_premise(x, y)
                                                          : dist_premise(x, y, p.bound.eval(db_.grid_, params)));
            }
            conclude(Rule::Horn, c, std::move(binding), {params.begin(), params.end()}, std::move(premises), is_eq,
                     lhs, rhs, eps);
          });
    }
  }

  // Substitutions range over the least term of each class: any other choice
  // yields congruent instances of equal or greater depth.
  void substitution_pass() {
    // Terms are stored in canonical order, so the first index met per root is
    // the least member of that class.
    std::map<std::size_t, std::size_t> least;
    for (std::size_t i = 0; i < n_; ++i) least.emplace(find(i), i);
    std::vector<std::size_t> choices;
    for (const auto& [root, term] : least) choices.push_back(term);

    for (const auto& ax : axioms_) {
      const std::size_t m = ax.context_size;
      std::vector<std::size_t> binding(m, 0);
      std::vector<std::size_t> next(m, 0);
      if (m == 0) {
        try_substitution(ax, binding);
        continue;
      }
      std::size_t pos = 0;
      while (true) {
        if (next[pos] == choices.size()) {
          if (pos == 0) break;
          next[pos] = 0;
          --pos;
          continue;
        }
        binding[pos] = choices[next[pos]++];
        charge(1);
        bool ok = true;
        for (std::size_t j = 0; j <= pos && ok; ++j) {
          ok = current(binding[pos], binding[j]) <= ax.context_dist[pos * m + j] &&
               current(binding[j], binding[pos]) <= ax.context_dist[j * m + pos];
        }
        if (!ok) continue;
        if (pos + 1 == m) {
          try_substitution(ax, binding);
        } else {
          ++pos;
        }
      }
    }
  }

  void try_substitution(const Axiom& ax, const std::vector<std::size_t>& binding) {
    auto s = instantiate(ax.lhs, binding);
    if (!s) return;
    auto t = instantiate(ax.rhs, binding);
    if (!t) return;
    bool is_eq = !ax.eps;
    int eps = ax.eps.value_or(0);
    if (!productive(is_eq, *s, *t, eps)) return;
    const std::size_t m = ax.context_size;
    std::vector<PremiseRef> premises;
    premises.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) premises.push_back(dist_premise(binding[i], binding[j], ax.context_dist[i * m + j]));
    }
    conclude(Rule::Subst, ax.index, binding, {}, std::move(premises), is_eq, *s, *t, eps);
  }

  void congruence_pass() {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> seen;
    for (std::size_t p = 0; p < n_; ++p) {
      const auto& node = db_.universe_.node(p);
      if (node.is_var || node.args.empty()) continue;
      std::vector<std::size_t> key_args;
      key_args.reserve(node.args.size());
      for (auto a : node.args) key_args.push_back(find(a));
      auto [it, inserted] = seen.emplace(std::make_pair(node.symbol, std::move(key_args)), p);
      if (inserted) continue;
      std::size_t q = it->second;
      if (find(q) == find(p)) continue;
      const auto& qnode = db_.universe_.node(q);
      std::vector<PremiseRef> premises;
      for (std::size_t i = 0; i < node.args.size(); ++i) premises.push_back(eq_premise(qnode.args[i], node.args[i]));
      conclude(Rule::Cong, 0, {}, {}, std::move(premises), true, q, p, 0);
    }
  }

  DerivationDB& db_;
  std::size_t n_;
  std::size_t budget_;
  std::size_t spent_ = 0;
  bool changed_ = false;
  std::vector<Axiom> axioms_;
};

DerivationDB saturate(const Signature& sig, const Theory& theory, const GMetSpec& spec, const FuzzySpace& target,
                      const SaturationOptions& options) {
  require_space(spec, target, options.grid, "target space");
  Universe universe(sig, target.carrier(), options.depth);
  DerivationDB db(sig, theory, spec, target, options.grid, std::move(universe));
  Saturator(db, options.instance_budget).run();
  return db;
}

bool derives(const DerivationDB& db, const Judgment& j) {
  if (!(j.context == db.target())) {
    throw Error(ErrorKind::PreconditionViolation, "judgment context differs from the saturated target space");
  }
  std::size_t s = db.index_of(j.lhs), t = db.index_of(j.rhs);
  if (!j.eps) return db.same_class(s, t);
  return db.distance_steps(s, t) <= db.grid().steps(*j.eps);
}

Rational distance(const DerivationDB& db, const Term& s, const Term& t) {
  return db.grid().value(db.distance_steps(db.index_of(s), db.index_of(t)));
}

/// Reassembles derivations from the recorded events, the proof forest of
/// merges and the left/right congruence and Max rules.
class TraceBuilder {
 public:
  explicit TraceBuilder(const DerivationDB& db) : db_(db) {}

  Derivation build(const Fact& fact) {
    std::size_t s = db_.index_of(fact.lhs), t = db_.index_of(fact.rhs);
    if (!fact.eps) {
      if (!db_.same_class(s, t)) throw Error(ErrorKind::UnknownFact, to_string(fact) + " is not derived");
      prove_eq(s, t);
    } else {
      int eps = db_.grid_.steps(*fact.eps);
      std::size_t r1 = db_.roots_[s], r2 = db_.roots_[t];
      if (db_.dmin_[r1 * db_.n_ + r2] > eps) throw Error(ErrorKind::UnknownFact, to_string(fact) + " is not derived");
      prove_dist(s, t, eps, db_.dist_event_[r1 * db_.n_ + r2]);
    }
    return std::move(out_);
  }

 private:
  using Event = DerivationDB::Event;

  Fact fact(bool is_eq, std::size_t s, std::size_t t, int eps) const {
    Fact f{db_.universe_.term(s), db_.universe_.term(t), std::nullopt};
    if (!is_eq) f.eps = db_.grid_.value(eps);
    return f;
  }

  std::size_t push(ProofStep step) {
    out_.steps.push_back(std::move(step));
    return out_.steps.size() - 1;
  }

  std::size_t simple(Rule rule, std::vector<std::size_t> premises, bool is_eq, std::size_t s, std::size_t t,
                     int eps) {
    ProofStep step{rule, {}, 0, 0, {}, {}, std::move(premises), fact(is_eq, s, t, eps)};
    return push(std::move(step));
  }

  // Path between s and t in the proof forest, as oriented (from, to, event) edges.
  std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> path(std::size_t s, std::size_t t) const {
    std::vector<std::size_t> up_s;
    for (std::size_t x = s; x != kNone; x = db_.proof_parent_[x]) up_s.push_back(x);
    std::vector<std::size_t> up_t;
    std::size_t meet = t;
    while (std::find(up_s.begin(), up_s.end(), meet) == up_s.end()) {
      up_t.push_back(meet);
      meet = db_.proof_parent_[meet];
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> edges;
    for (std::size_t x = s; x != meet; x = db_.proof_parent_[x]) {
      edges.emplace_back(x, db_.proof_parent_[x], db_.proof_edge_[x]);
    }
    for (auto it = up_t.rbegin(); it != up_t.rend(); ++it) {
      edges.emplace_back(db_.proof_parent_[*it], *it, db_.proof_edge_[*it]);
    }
    return edges;
  }

  std::size_t prove_eq(std::size_t s, std::size_t t) {
    auto key = std::make_tuple(true, s, t, 0, std::int64_t{-1});
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::size_t result;
    if (s == t) {
      result = simple(Rule::Refl, {}, true, s, s, 0);
    } else {
      std::optional<std::size_t> acc;
      for (const auto& [from, to, event] : path(s, t)) {
        std::size_t step = prove_event(event);
        const Event& e = db_.events_[static_cast<std::size_t>(event)];
        if (e.lhs != from) step = simple(Rule::Symm, {step}, true, from, to, 0);
        acc = acc ? simple(Rule::Trans, {*acc, step}, true, s, to, 0) : step;
      }
      result = *acc;
    }
    memo_.emplace(key, result);
    return result;
  }

  std::size_t prove_dist(std::size_t s, std::size_t t, int eps, std::int64_t event) {
    auto key = std::make_tuple(false, s, t, eps, event);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::size_t step;
    if (event < 0) {
      step = simple(Rule::OneMax, {}, false, s, t, db_.grid_.top());
    } else {
      const Event& e = db_.events_[static_cast<std::size_t>(event)];
      step = prove_event(event);
      if (e.lhs != s) step = simple(Rule::LCong, {prove_eq(s, e.lhs), step}, false, s, e.rhs, e.eps);
      if (e.rhs != t) step = simple(Rule::RCong, {prove_eq(e.rhs, t), step}, false, s, t, e.eps);
      if (e.eps < eps) step = simple(Rule::Max, {step}, false, s, t, eps);
    }
    memo_.emplace(key, step);
    return step;
  }

  std::size_t prove_event(std::int64_t id) {
    if (auto it = events_done_.find(id); it != events_done_.end()) return it->second;
    const Event& e = db_.events_[static_cast<std::size_t>(id)];
    ProofStep step{e.rule, {}, 0, 0, {}, {}, {}, fact(e.is_eq, e.lhs, e.rhs, e.eps)};
    for (const auto& p : e.premises) {
      step.premises.push_back(p.is_eq ? prove_eq(p.lhs, p.rhs) : prove_dist(p.lhs, p.rhs, p.eps, p.justification));
    }
    for (auto b : e.binding) step.binding.push_back(db_.universe_.term(b));
    for (auto p : e.params) step.params.push_back(db_.grid_.value(p));
    if (e.rule == Rule::Horn) {
      step.clause = e.detail;
      step.label = db_.spec_.clauses[e.detail].name;
    } else if (e.rule == Rule::Init || e.rule == Rule::Subst) {
      step.axiom = e.detail;
      step.label = "axiom " + std::to_string(e.detail);
    }
    std::size_t result = push(std::move(step));
    events_done_.emplace(id, result);
    return result;
  }

  const DerivationDB& db_;
  Derivation out_;
  std::map<std::tuple<bool, std::size_t, std::size_t, int, std::int64_t>, std::size_t> memo_;
  std::map<std::int64_t, std::size_t> events_done_;
};

Derivation trace(const DerivationDB& db, const Fact& fact) { return TraceBuilder(db).build(fact); }

Theory gen_nonexpansive_axioms(const Signature& sig, const std::string& op, const Grid& grid) {
  auto arity = sig.arity(op);
  if (!arity) throw Error(ErrorKind::InvalidArgument, "unknown operation '" + op + "'");
  if (*arity < 1) throw Error(ErrorKind::InvalidArgument, "'" + op + "' has no arguments to compare");
  const std::size_t n = static_cast<std::size_t>(*arity);
  std::vector<std::string> names;
  std::vector<Term> xs, ys;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(Term::var(names[i]));
    ys.push_back(Term::var(names[n + i]));
  }
  Theory theory{"nonexpansive " + op, {}};
  for (int k = 0; k <= grid.top(); ++k) {
    Rational eps = grid.value(k);
    FuzzySpace ctx = FuzzySpace::uniform(names, Rational(1), Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      ctx.set_d(i, n + i, eps);
      ctx.set_d(n + i, i, eps);
    }
    theory.judgments.push_back(Judgment{std::move(ctx), Term::app(op, xs), Term::app(op, ys), eps});
  }
  return theory;
}

}  // namespace qeq

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qeq {

/// Finite set of operation symbols with arities.
class Signature {
 public:
  Signature() = default;
  explicit Signature(const std::map<std::string, int>& ops);

  void add(const std::string& name, int arity);

  std::optional<int> arity(std::string_view name) const;
  bool contains(std::string_view name) const { return arity(name).has_value(); }
  bool has_constant() const;
  bool empty() const { return ops_.empty(); }
  const std::map<std::string, int, std::less<>>& ops() const { return ops_; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int, std::less<>> ops_;
};

/// Immutable term: a variable (named by a carrier element) or an application.
/// Copies share structure.
class Term {
 public:
  static Term var(std::string name);
  static Term app(std::string op, std::vector<Term> args = {});

  bool is_var() const { return node_->is_var; }
  const std::string& head() const { return node_->head; }
  std::span<const Term> args() const { return node_->args; }
  int depth() const { return node_->depth; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var;
    std::string head;
    std::vector<Term> args;
    int depth;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Depth first, then head symbol, then variables before applications, then
/// arguments lexicographically.
std::strong_ordering canonical_cmp(const Term& a, const Term& b);

struct CanonicalLess {
  bool operator()(const Term& a, const Term& b) const { return canonical_cmp(a, b) < 0; }
};

std::string to_string(const Term& t);

/// Parses prefix syntax such as `u(u(a))`. A bare identifier is a constant when
/// the signature declares it with arity 0 and a variable otherwise. Bracketed
/// names like `[u(a)]` are read as single variable names.
Term parse_term(std::string_view text, const Signature& sig);

/// Throws InvalidArgument when an application disagrees with the signature.
void validate(const Term& t, const Signature& sig);

/// Variable names occurring in `t`, sorted and unique.
std::vector<std::string> variables(const Term& t);

using Substitution = std::map<std::string, Term, std::less<>>;

/// Simultaneous replacement of variables; throws UnknownVariable when a
/// variable of `t` is outside the domain of `sigma`.
Term apply_subst(const Substitution& sigma, const Term& t);

/// False exactly when the carrier is empty and the signature has no constants.
bool check_nontrivial(const Signature& sig, std::span<const std::string> carrier);

/// All terms of depth at most `depth`, in canonical order. Throws TrivialPair.
std::vector<Term> enumerate_universe(const Signature& sig, std::span<const std::string> carrier,
                                     int depth);

/// Indexed form of a bounded term universe. Each term knows the indices of its
/// arguments, so applications can be resolved without rebuilding terms.
class Universe {
 public:
  struct Node {
    bool is_var;
    std::size_t symbol;  // carrier index for variables, op index otherwise
    std::vector<std::size_t> args;
  };

  Universe(const Signature& sig, std::vector<std::string> carrier, int depth);

  std::size_t size() const { return terms_.size(); }
  int depth() const { return depth_; }
  const Term& term(std::size_t i) const { return terms_[i]; }
  const std::vector<Term>& terms() const { return terms_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::string>& carrier() const { return carrier_; }
  const std::vector<std::string>& op_names() const { return op_names_; }
  int op_arity(std::size_t op) const { return op_arities_[op]; }
  std::optional<std::size_t> op_index(std::string_view op) const;

  std::optional<std::size_t> find(const Term& t) const;
  std::optional<std::size_t> find_app(std::size_t op, std::span<const std::size_t> args) const;
  std::size_t var_term(std::size_t carrier_index) const { return var_terms_[carrier_index]; }

 private:
  int depth_;
  std::vector<std::string> carrier_;
  std::vector<std::string> op_names_;
  std::vector<int> op_arities_;
  std::vector<Term> terms_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> var_terms_;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> apps_;
};

}  // namespace qeq

#include "qeqlog/terms.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "qeqlog/error.hpp"
#include "qeqlog/odometer.hpp"

namespace qeq {

Signature::Signature(const std::map<std::string, int>& ops) {
  for (const auto& [name, arity] : ops) add(name, arity);
}

void Signature::add(const std::string& name, int arity) {
  if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty operation symbol");
  if (arity < 0) throw Error(ErrorKind::InvalidArgument, "negative arity for '" + name + "'");
  if (!ops_.emplace(name, arity).second) {
    throw Error(ErrorKind::InvalidArgument, "duplicate operation symbol '" + name + "'");
  }
}

std::optional<int> Signature::arity(std::string_view name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) return std::nullopt;
  return it->second;
}

bool Signature::has_constant() const {
  return std::any_of(ops_.begin(), ops_.end(), [](const auto& op) { return op.second == 0; });
}

Term Term::var(std::string name) {
  if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty variable name");
  return Term(std::make_shared<const Node>(Node{true, std::move(name), {}, 1}));
}

Term Term::app(std::string op, std::vector<Term> args) {
  if (op.empty()) throw Error(ErrorKind::InvalidArgument, "empty operation symbol");
  int depth = 0;
  for (const auto& a : args) depth = std::max(depth, a.depth());
  return Term(std::make_shared<const Node>(Node{false, std::move(op), std::move(args), depth + 1}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return canonical_cmp(a, b) == 0;
}

std::strong_ordering canonical_cmp(const Term& a, const Term& b) {
  if (auto c = a.depth() <=> b.depth(); c != 0) return c;
  if (auto c = a.head() <=> b.head(); c != 0) return c;
  if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  auto aa = a.args();
  auto ba = b.args();
  if (auto c = aa.size() <=> ba.size(); c != 0) return c;
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (auto c = canonical_cmp(aa[i], ba[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string to_string(const Term& t) {
  if (t.is_var() || t.args().empty()) return t.head();
  std::string out = t.head() + "(";
  bool first = true;
  for (const auto& a : t.args()) {
    if (!first) out += ",";
    first = false;
    out += to_string(a);
  }
  return out + ")";
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Term parse() {
    Term t = term();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ParseError,
                why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
  }

  std::string bracketed() {
    std::size_t start = pos_;
    int level = 0;
    do {
      if (pos_ >= text_.size()) fail("unbalanced '['");
      if (text_[pos_] == '[') ++level;
      if (text_[pos_] == ']') --level;
      ++pos_;
    } while (level > 0);
    return std::string(text_.substr(start, pos_ - start));
  }

  Term term() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '[') return Term::var(bracketed());
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    std::string name(text_.substr(start, pos_ - start));
    skip_space();
    auto arity = sig_.arity(name);
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (!arity) fail("unknown operation '" + name + "'");
      ++pos_;
      std::vector<Term> args;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        while (true) {
          args.push_back(term());
          skip_space();
          if (pos_ >= text_.size()) fail("unterminated argument list");
          if (text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (text_[pos_] == ')') {
            ++pos_;
            break;
          }
          fail("expected ',' or ')'");
        }
      }
      if (static_cast<int>(args.size()) != *arity) {
        fail("'" + name + "' expects " + std::to_string(*arity) + " arguments");
      }
      return Term::app(std::move(name), std::move(args));
    }
    if (arity) {
      if (*arity != 0) fail("'" + name + "' expects " + std::to_string(*arity) + " arguments");
      return Term::app(std::move(name));
    }
    return Term::var(std::move(name));
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.head());
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) { return TermParser(text, sig).parse(); }

void validate(const Term& t, const Signature& sig) {
  if (t.is_var()) return;
  auto arity = sig.arity(t.head());
  if (!arity) throw Error(ErrorKind::InvalidArgument, "unknown operation '" + t.head() + "'");
  if (*arity != static_cast<int>(t.args().size())) {
    throw Error(ErrorKind::InvalidArgument, "arity mismatch in " + to_string(t));
  }
  for (const auto& a : t.args()) validate(a, sig);
}

std::vector<std::string> variables(const Term& t) {
  std::set<std::string> out;
  collect_variables(t, out);
  return {out.begin(), out.end()};
}

Term apply_subst(const Substitution& sigma, const Term& t) {
  if (t.is_var()) {
    auto it = sigma.find(t.head());
    if (it == sigma.end()) {
      throw Error(ErrorKind::UnknownVariable, "'" + t.head() + "' is not in the substitution domain");
    }
    return it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(apply_subst(sigma, a));
  return Term::app(t.head(), std::move(args));
}

bool check_nontrivial(const Signature& sig, std::span<const std::string> carrier) {
  return !carrier.empty() || sig.has_constant();
}

std::vector<Term> enumerate_universe(const Signature& sig, std::span<const std::string> carrier,
                                     int depth) {
  if (!check_nontrivial(sig, carrier)) {
    throw Error(ErrorKind::TrivialPair, "empty carrier and no constants: the term set is empty");
  }
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "universe depth must be positive");

  std::set<Term, CanonicalLess> level;  // terms of depth <= k - 1
  for (int k = 1; k <= depth; ++k) {
    std::vector<Term> previous(level.begin(), level.end());
    std::set<Term, CanonicalLess> next;
    for (const auto& a : carrier) next.insert(Term::var(a));
    for (const auto& [op, arity] : sig.ops()) {
      if (arity == 0) {
        next.insert(Term::app(op));
        continue;
      }
      if (previous.empty()) continue;
      std::vector<std::size_t> digits(static_cast<std::size_t>(arity), 0);
      do {
        std::vector<Term> args;
        args.reserve(digits.size());
        for (auto d : digits) args.push_back(previous[d]);
        next.insert(Term::app(op, std::move(args)));
      } while (advance(digits, previous.size()));
    }
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

Universe::Universe(const Signature& sig, std::vector<std::string> carrier, int depth)
    : depth_(depth), carrier_(std::move(carrier)) {
  for (const auto& [name, arity] : sig.ops()) {
    op_names_.push_back(name);
    op_arities_.push_back(arity);
  }
  terms_ = enumerate_universe(sig, carrier_, depth);
  nodes_.reserve(terms_.size());
  var_terms_.assign(carrier_.size(), 0);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    Node node{t.is_var(), 0, {}};
    if (t.is_var()) {
      auto it = std::find(carrier_.begin(), carrier_.end(), t.head());
      node.symbol = static_cast<std::size_t>(it - carrier_.begin());
      var_terms_[node.symbol] = i;
    } else {
      node.symbol = *op_index(t.head());
      for (const auto& a : t.args()) node.args.push_back(*find(a));
      apps_.emplace(std::make_pair(node.symbol, node.args), i);
    }
    nodes_.push_back(std::move(node));
  }
}

std::optional<std::size_t> Universe::op_index(std::string_view op) const {
  auto it = std::find(op_names_.begin(), op_names_.end(), op);
  if (it == op_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - op_names_.begin());
}

std::optional<std::size_t> Universe::find(const Term& t) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t, CanonicalLess{});
  if (it == terms_.end() || canonical_cmp(*it, t) != 0) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

std::optional<std::size_t> Universe::find_app(std::size_t op, std::span<const std::size_t> args) const {
  auto it = apps_.find(std::make_pair(op, std::vector<std::size_t>(args.begin(), args.end())));
  if (it == apps_.end()) return std::nullopt;
  return it->second;
}

}  // namespace qeq

#pragma once

#include "qeqlog/qalg.hpp"

namespace qeq::testing {

inline Signature sig_of(std::initializer_list<std::pair<const char*, int>> ops) {
  Signature s;
  for (const auto& [name, arity] : ops) s.add(name, arity);
  return s;
}

inline std::vector<std::string> names_for(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

inline Rational r(const char* text) { return Rational::parse(text); }

/// {a, b} with d(a,b) = d(b,a) = `off` and zero self-distance.
inline FuzzySpace pair_space(const char* off = "1/2", const char* x = "a", const char* y = "b") {
  return FuzzySpace::uniform({x, y}, r(off));
}

inline FuzzySpace point(const char* x = "x") { return FuzzySpace::uniform({x}, Rational(1)); }

/// {p, q} at distance 1/2 with u swapping the points.
inline QuantAlgebra swap_algebra(const char* off = "1/2") {
  return QuantAlgebra(sig_of({{"u", 1}}), pair_space(off, "p", "q"), {{"u", {1, 0}}});
}

/// forall A. a =_0 b over {a,b} at 1/2.
inline Theory collapse_theory() {
  return Theory{"collapse", {Judgment{pair_space(), Term::var("a"), Term::var("b"), Rational(0)}}};
}

/// forall ({x}, 0). u(x) =_{1/4} x.
inline Theory drift_theory() {
  return Theory{"drift", {Judgment{point(), Term::app("u", {Term::var("x")}), Term::var("x"), r("1/4")}}};
}

/// forall ({x}, 0). u(u(x)) = x.
inline Theory involution_theory() {
  Term x = Term::var("x");
  return Theory{"involution", {Judgment{point(), Term::app("u", {Term::app("u", {x})}), x, std::nullopt}}};
}

}  // namespace qeq::testing

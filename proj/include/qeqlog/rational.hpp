#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qeq {

/// Exact nonnegative-or-signed fraction in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  /// Accepts "p/q", integers and finite decimals ("0.25"); the result is exact.
  static Rational parse(std::string_view text);

  /// "0", "1", "3/4".
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The finite set of admissible distances {0, 1/q, ..., 1}. Values inside the
/// engine are handled as step counts k, standing for k/q.
class Grid {
 public:
  explicit Grid(int denominator = 24);

  int denominator() const noexcept { return q_; }
  int top() const noexcept { return q_; }

  bool contains(const Rational& r) const;
  /// Throws GridMismatch for values off the grid or outside [0,1].
  int steps(const Rational& r) const;
  Rational value(int steps) const;
  /// Snaps a decimal read from JSON onto the grid; off-grid values throw GridMismatch.
  int steps_of_decimal(double x) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int q_;
};

}  // namespace qeq

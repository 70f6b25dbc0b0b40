#include "qeqlog/rational.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "qeqlog/error.hpp"

namespace qeq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::TrivialPair: return "TrivialPair";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::UnsupportedPreset: return "UnsupportedPreset";
    case ErrorKind::SpecViolation: return "SpecViolation";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::OutOfUniverse: return "OutOfUniverse";
    case ErrorKind::UnknownFact: return "UnknownFact";
    case ErrorKind::NotAModel: return "NotAModel";
    case ErrorKind::NotNonexpansive: return "NotNonexpansive";
    case ErrorKind::EMLawViolation: return "EMLawViolation";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnresolvedName: return "UnresolvedName";
  }
  return "Error";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&] { return Error(ErrorKind::ParseError, "bad number '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    ++i;
  }
  auto read_digits = [&](std::int64_t& value, int& count) {
    value = 0;
    count = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (count > 15) throw fail();
      value = value * 10 + (text[i] - '0');
      ++i;
      ++count;
    }
  };
  std::int64_t whole = 0;
  int n = 0;
  read_digits(whole, n);
  if (n == 0) throw fail();
  Rational result(whole);
  if (i < text.size() && text[i] == '/') {
    ++i;
    std::int64_t den = 0;
    read_digits(den, n);
    if (n == 0 || den == 0) throw fail();
    result = Rational(whole, den);
  } else if (i < text.size() && text[i] == '.') {
    ++i;
    std::int64_t frac = 0;
    read_digits(frac, n);
    if (n == 0) throw fail();
    std::int64_t scale = 1;
    for (int k = 0; k < n; ++k) scale *= 10;
    result = Rational(whole * scale + frac, scale);
  }
  if (i != text.size()) throw fail();
  return negative ? Rational(-result.num(), result.den()) : result;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

Grid::Grid(int denominator) : q_(denominator) {
  if (denominator <= 0) throw Error(ErrorKind::InvalidArgument, "grid denominator must be positive");
}

bool Grid::contains(const Rational& r) const {
  if (r < Rational(0) || r > Rational(1)) return false;
  return (r.num() * q_) % r.den() == 0;
}

int Grid::steps(const Rational& r) const {
  if (!contains(r)) {
    throw Error(ErrorKind::GridMismatch,
                r.to_string() + " is not on the grid 1/" + std::to_string(q_));
  }
  return static_cast<int>(r.num() * q_ / r.den());
}

Rational Grid::value(int steps) const { return Rational(steps, q_); }

int Grid::steps_of_decimal(double x) const {
  double scaled = x * q_;
  double k = std::round(scaled);
  if (!(std::fabs(scaled - k) < 1e-9) || k < 0 || k > q_) {
    throw Error(ErrorKind::GridMismatch,
                std::to_string(x) + " is not on the grid 1/" + std::to_string(q_));
  }
  return static_cast<int>(k);
}

}  // namespace qeq

#pragma once

#include <cstddef>
#include <vector>

namespace qeq {

/// Steps `digits` to the next tuple in lexicographic order over {0..base-1}.
/// Returns false after the last tuple (digits wrap back to all zeros).
inline bool advance(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t pos = digits.size(); pos-- > 0;) {
    if (++digits[pos] < base) return true;
    digits[pos] = 0;
  }
  return false;
}

/// base^exponent, saturating at `cap + 1` so callers can compare with a budget.
inline std::size_t bounded_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

}  // namespace qeq

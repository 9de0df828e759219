#pragma once

#include <cstdint>

#include "error.hpp"

namespace jamison {

/// Triangular enumeration j: blocks of lengths 1, 2, 3, ... start at n = 2,
/// and position r of a block maps to r + 1.
///   n : 2 3 4 5 6 7 8 9 10 11 ...
///   j : 1 1 2 1 2 3 1 2 3  4  ...
inline int fiber_map(std::int64_t n) {
  if (n < 2) throw error(errc::invalid_index, "fiber_map needs n >= 2");
  std::int64_t start = 2, len = 1;
  while (n >= start + len) {
    start += len;
    ++len;
  }
  return static_cast<int>(n - start + 1);
}

}  // namespace jamison

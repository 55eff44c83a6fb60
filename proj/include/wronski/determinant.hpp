#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wronski {

// Determinant over a commutative ring by Laplace expansion along rows with
// memoization on the set of remaining columns. Cost is O(n·2^n) ring
// products and needs no division, so polynomial entries keep exact degree
// bookkeeping. T needs +=, -=, * and construction from 0.
template <class T>
T laplace_det(const std::vector<std::vector<T>>& m, T zero) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return zero;
  if (n > 20) throw std::length_error("laplace_det: matrix too large");
  const uint32_t full = (1u << n) - 1;
  // memo[mask] = det of the bottom |mask| rows restricted to columns in mask.
  std::vector<T> memo(size_t(1) << n, zero);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    const int k = std::popcount(mask);
    const int row = n - k;
    T acc = zero;
    int pos = 0;
    for (int c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      const uint32_t rest = mask & ~(1u << c);
      T term = (k == 1) ? m[row][c] : m[row][c] * memo[rest];
      if (pos % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
      ++pos;
    }
    memo[mask] = acc;
  }
  return memo[full];
}

}  // namespace wronski

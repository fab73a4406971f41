#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "valdist/errors.hpp"

namespace valdist {

/// Determinant over a commutative ring by Laplace expansion along rows,
/// memoized on the set of still-unused columns. Needs only +, -, * and
/// copies of R, so it works for polynomial rings where pivoting is not
/// available. Cost is O(n 2^n) ring multiplications.
template <typename R>
R determinant(const std::vector<std::vector<R>>& m, const R& zero) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("determinant of an empty matrix");
  for (const auto& row : m) {
    if (row.size() != n) throw DomainError("determinant of a non-square matrix");
  }
  if (n > 24) throw DomainError("matrix too large for Laplace expansion");
  // minor[mask] = determinant of rows (n - popcount(mask))..n-1 restricted to columns in mask
  std::unordered_map<std::uint32_t, R> memo;
  const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
  auto popcount = [](std::uint32_t x) {
    int c = 0;
    while (x) {
      x &= x - 1;
      ++c;
    }
    return c;
  };
  // process masks by increasing size
  std::vector<std::vector<std::uint32_t>> by_size(n + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) by_size[static_cast<std::size_t>(popcount(mask))].push_back(mask);
  for (std::size_t sz = 1; sz <= n; ++sz) {
    const std::size_t row = n - sz;
    for (std::uint32_t mask : by_size[sz]) {
      R acc = zero;
      int sign_pos = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        std::uint32_t rest = mask & ~(1u << c);
        const R& entry = m[row][c];
        if (sz == 1) {
          acc = entry;
        } else {
          R term = entry * memo.at(rest);
          if (sign_pos % 2 == 0) {
            acc = acc + term;
          } else {
            acc = acc - term;
          }
        }
        ++sign_pos;
      }
      memo.emplace(mask, std::move(acc));
    }
  }
  return memo.at(full);
}

} // namespace valdist

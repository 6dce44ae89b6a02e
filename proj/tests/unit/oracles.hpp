#pragma once

// Independent reference computations used by tests. Nothing here calls into
// the library's algorithms beyond the Word container.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hamsync/word.hpp"

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t next_prime(std::uint64_t n) {
  while (!is_prime(n)) ++n;
  return n;
}

/// Pascal's triangle in doubles; exact for the small n used in tests.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::vector<double> row(n + 1, 0.0);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i; j > 0; --j) row[j] += row[j - 1];
  }
  return row[k];
}

/// Count words within distance r of 0 by scanning the cube (n <= 20).
inline std::uint64_t ball_volume_by_scan(std::size_t r, std::size_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    if (static_cast<std::size_t>(std::popcount(v)) <= r) ++count;
  }
  return count;
}

/// Parity check rows as bitmasks (bit j = column j).
inline std::vector<std::uint64_t> rows_of(const std::vector<hamsync::Word>& rows) {
  std::vector<std::uint64_t> out;
  for (const auto& r : rows) out.push_back(r.to_uint());
  return out;
}

inline bool in_kernel(const std::vector<std::uint64_t>& h_rows, std::uint64_t v) {
  for (auto r : h_rows) {
    if (std::popcount(r & v) % 2 != 0) return false;
  }
  return true;
}

inline std::uint64_t syndrome_of(const std::vector<std::uint64_t>& h_rows, std::uint64_t v) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < h_rows.size(); ++i) {
    if (std::popcount(h_rows[i] & v) % 2 != 0) s |= std::uint64_t{1} << i;
  }
  return s;
}

/// Every codeword (H c = 0) within `radius` of y, by scanning all 2^n words,
/// ascending in the library's lexicographic order (bit 0 most significant).
inline std::vector<hamsync::Word> list_decode_by_scan(const std::vector<std::uint64_t>& h_rows, std::size_t n,
                                                      std::uint64_t y, std::size_t radius) {
  std::vector<hamsync::Word> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    if (static_cast<std::size_t>(std::popcount(v ^ y)) <= radius && in_kernel(h_rows, v)) {
      out.push_back(hamsync::Word::from_uint(v, n));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Carry-less multiply then reduce by `poly` (degree k).
inline std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, unsigned k, std::uint32_t poly) {
  std::uint64_t acc = 0;
  for (unsigned i = 0; i < k; ++i) {
    if (b >> i & 1) acc ^= static_cast<std::uint64_t>(a) << i;
  }
  for (int bit = 2 * static_cast<int>(k) - 2; bit >= static_cast<int>(k); --bit) {
    if (acc >> bit & 1) acc ^= static_cast<std::uint64_t>(poly) << (bit - static_cast<int>(k));
  }
  return static_cast<std::uint32_t>(acc);
}

/// Horner evaluation with the oracle multiply.
inline std::uint32_t gf_eval(const std::vector<std::uint32_t>& coeffs, std::uint32_t x, unsigned k,
                             std::uint32_t poly) {
  std::uint32_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = gf_mul(acc, x, k, poly) ^ *it;
  return acc;
}

}  // namespace oracle

#pragma once

// Independent reference implementations, written from the defining formulas
// and sharing no code with the library.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Block = std::array<double, 64>;

inline double alpha(int p) { return p == 0 ? 1.0 / std::sqrt(8.0) : std::sqrt(2.0 / 8.0); }

/// B_pq = a_p a_q sum_m sum_n A_mn cos(pi(2m+1)p/16) cos(pi(2n+1)q/16),
/// with m the row index and n the column index.
inline Block dct_double_sum(const Block& a) {
  Block out{};
  for (int p = 0; p < 8; ++p) {
    for (int q = 0; q < 8; ++q) {
      double s = 0.0;
      for (int m = 0; m < 8; ++m) {
        for (int n = 0; n < 8; ++n) {
          s += a[m * 8 + n] * std::cos(std::numbers::pi * (2 * m + 1) * p / 16.0) *
               std::cos(std::numbers::pi * (2 * n + 1) * q / 16.0);
        }
      }
      out[p * 8 + q] = alpha(p) * alpha(q) * s;
    }
  }
  return out;
}

inline Block idct_double_sum(const Block& b) {
  Block out{};
  for (int m = 0; m < 8; ++m) {
    for (int n = 0; n < 8; ++n) {
      double s = 0.0;
      for (int p = 0; p < 8; ++p) {
        for (int q = 0; q < 8; ++q) {
          s += alpha(p) * alpha(q) * b[p * 8 + q] * std::cos(std::numbers::pi * (2 * m + 1) * p / 16.0) *
               std::cos(std::numbers::pi * (2 * n + 1) * q / 16.0);
        }
      }
      out[m * 8 + n] = s;
    }
  }
  return out;
}

/// Binary long division of 1 by q: the first `n` fractional digits.
inline std::vector<int> binary_expansion_of_reciprocal(std::uint64_t q, std::size_t n) {
  std::vector<int> digits;
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    r *= 2;
    digits.push_back(r >= q ? 1 : 0);
    if (r >= q) r -= q;
  }
  return digits;
}

/// Smallest k with 2^k = 1 (mod q), by stepping through powers.
inline std::uint64_t brute_force_order(std::uint64_t q) {
  std::uint64_t v = 2 % q;
  std::uint64_t k = 1;
  while (v != 1) {
    v = (v * 2) % q;
    ++k;
  }
  return k;
}

inline bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Population variance of a block's 64 samples.
inline double block_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size());
}

}  // namespace oracle

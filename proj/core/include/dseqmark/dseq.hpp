#pragma once

#include <cstdint>
#include <vector>

#include "dseqmark/imaging.hpp"

namespace dseqmark {

/// Largest accepted key. Keeps q - 1 factorable by trial division.
inline constexpr std::uint64_t kMaxPrimeKey = (1ULL << 32) - 1;

bool is_prime(std::uint64_t n) noexcept;

/// Smallest k > 0 with 2^k = 1 (mod q); q must be an odd prime.
std::uint64_t multiplicative_order_of_two(std::uint64_t q);

/// Bipolar binary d-sequence of 1/q: chip i is +1 when
/// (2^(i+1) mod q) is odd, -1 otherwise.
class DSequence {
 public:
  /// Validates the key and materializes the first `length` chips.
  DSequence(std::uint64_t prime_q, std::size_t length);

  std::uint64_t prime() const noexcept { return prime_; }
  std::uint64_t period() const noexcept { return period_; }
  std::size_t size() const noexcept { return chips_.size(); }

  /// Defined for every index by cyclic extension of one period.
  int chip(std::uint64_t i) const;
  const std::vector<std::int8_t>& chips() const noexcept { return chips_; }

  /// True when covering `count` chips repeats the sequence.
  bool wraps(std::uint64_t count) const noexcept { return period_ < count; }

 private:
  std::uint64_t prime_;
  std::uint64_t period_;
  std::vector<std::int8_t> chips_;
};

/// Raw binary digits a_i of 1/q.
std::vector<std::uint8_t> dsequence_bits(std::uint64_t prime_q, std::size_t length);

/// Prefix of `length` chips.
DSequence generate(std::uint64_t prime_q, std::size_t length);

/// Chips [b * band_size, (b + 1) * band_size) for block b: one continuous
/// stream across blocks in row-major order.
std::vector<int> segment_for_block(const DSequence& seq, BlockIndex block, std::size_t band_size);

}  // namespace dseqmark

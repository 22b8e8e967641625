#include "dseqmark/dseq.hpp"

#include <string>

#include "dseqmark/error.hpp"

namespace dseqmark {

namespace {

__extension__ typedef unsigned __int128 uint128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

void validate_key(std::uint64_t q) {
  if (q == 2) throw Error(ErrorCode::QisTwo, "q = 2 has a terminating binary expansion");
  if (q > kMaxPrimeKey) {
    throw Error(ErrorCode::KeyOutOfRange, std::to_string(q) + " exceeds the largest supported key");
  }
  if (!is_prime(q)) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not prime");
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // This witness set is deterministic for all 64-bit n.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t multiplicative_order_of_two(std::uint64_t q) {
  validate_key(q);
  // ord divides q - 1: strip each prime factor while 2^(order/p) stays 1.
  std::uint64_t order = q - 1;
  std::uint64_t rest = q - 1;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    while (order % p == 0 && pow_mod(2, order / p, q) == 1) order /= p;
  }
  if (rest > 1) {
    while (order % rest == 0 && pow_mod(2, order / rest, q) == 1) order /= rest;
  }
  return order;
}

std::vector<std::uint8_t> dsequence_bits(std::uint64_t prime_q, std::size_t length) {
  validate_key(prime_q);
  std::vector<std::uint8_t> bits(length);
  std::uint64_t r = 2 % prime_q;  // 2^(i+1) mod q
  for (auto& bit : bits) {
    bit = static_cast<std::uint8_t>(r & 1U);
    r = (r << 1U) % prime_q;
  }
  return bits;
}

DSequence::DSequence(std::uint64_t prime_q, std::size_t length)
    : prime_(prime_q), period_(multiplicative_order_of_two(prime_q)) {
  const auto bits = dsequence_bits(prime_q, length);
  chips_.reserve(bits.size());
  for (auto bit : bits) chips_.push_back(static_cast<std::int8_t>(bit ? 1 : -1));
}

int DSequence::chip(std::uint64_t i) const {
  if (i < chips_.size()) return chips_[i];
  const std::uint64_t k = i % period_;
  if (k < chips_.size()) return chips_[k];
  return (pow_mod(2, k + 1, prime_) & 1U) ? 1 : -1;
}

DSequence generate(std::uint64_t prime_q, std::size_t length) { return DSequence(prime_q, length); }

std::vector<int> segment_for_block(const DSequence& seq, BlockIndex block, std::size_t band_size) {
  if (band_size == 0) throw Error(ErrorCode::InvalidArgument, "band size must be positive");
  std::vector<int> out(band_size);
  const std::uint64_t start = static_cast<std::uint64_t>(block.linear) * band_size;
  for (std::size_t k = 0; k < band_size; ++k) out[k] = seq.chip(start + k);
  return out;
}

}  // namespace dseqmark

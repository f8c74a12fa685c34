#pragma once

#include <cstdint>
#include <vector>

#include "maierlab/errors.hpp"

namespace maierlab {

enum class SieveMode { prime, rough };

/// Ordered primes <= z (z >= 2).
std::vector<std::int64_t> primes_up_to(std::int64_t z);

/// Packed indicator bits over an integer range [lo, hi), lo may be negative.
/// PRIME mode: bit(n) = 1 iff |n| is prime (bit(0) = bit(+-1) = 0).
/// ROUGH(z) mode: bit(n) = 1 iff gcd(n, P(z)) = 1 (so bit(0) = 0, bit(+-1) = 1).
class SegmentedSieve {
 public:
  static SegmentedSieve primes(std::int64_t lo, std::int64_t hi, int threads = 0);
  static SegmentedSieve rough(std::int64_t lo, std::int64_t hi, std::int64_t z,
                              int threads = 0);

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  SieveMode mode() const { return mode_; }
  std::int64_t z() const { return z_; }

  bool test(std::int64_t n) const {
    if (n < lo_ || n >= hi_) fail(errc::out_of_range, "sieve lookup outside range");
    std::uint64_t i = static_cast<std::uint64_t>(n - lo_);
    return (bits_[i >> 6] >> (i & 63)) & 1;
  }

  /// Population count over [a, b) within the range.
  std::uint64_t count(std::int64_t a, std::int64_t b) const;
  std::uint64_t count() const { return count(lo_, hi_); }

  const std::vector<std::uint64_t>& words() const { return bits_; }

 private:
  SegmentedSieve(std::int64_t lo, std::int64_t hi, SieveMode mode, std::int64_t z);

  std::int64_t lo_, hi_;
  SieveMode mode_;
  std::int64_t z_;
  std::vector<std::uint64_t> bits_;
};

/// Convenience: sieve with mode selected at runtime (z ignored in PRIME mode).
SegmentedSieve sieve_range(std::int64_t lo, std::int64_t hi, SieveMode mode,
                           std::int64_t z = 0, int threads = 0);

/// #{1 <= n <= x : gcd(n, P(z)) = 1}, exact via segmented sieving.
std::uint64_t rough_count(std::int64_t x, std::int64_t z, int threads = 0);

/// #{lo <= n < hi : n prime}, exact.
std::uint64_t prime_count(std::int64_t lo, std::int64_t hi, int threads = 0);

/// Deterministic Miller-Rabin for 63-bit inputs (cross-check path only).
bool is_prime_u64(std::uint64_t n);

}  // namespace maierlab

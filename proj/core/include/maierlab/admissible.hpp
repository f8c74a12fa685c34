#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "maierlab/linear_forms.hpp"
#include "maierlab/numeric.hpp"

namespace maierlab {

/// The admissible set A inside (Z/P(z)Z)^d held in factored per-prime form:
/// by CRT, #A is the product of the per-prime nonvanishing counts.
struct AdmissibleProfile {
  LinearSystem system;
  std::int64_t z = 0;
  std::vector<std::pair<std::int64_t, BigInt>> per_prime_counts;  // ascending p
  bool degenerate = false;  // some prime kills every residue tuple

  BigInt total() const {
    BigInt t = 1;
    for (const auto& [p, c] : per_prime_counts) t *= c;
    return t;
  }
};

AdmissibleProfile build_profile(const LinearSystem& system, std::int64_t z);

/// Exact per-prime check of count_p = p^d ((p-1)/p)^t beta_p, in rational
/// arithmetic. A false return means the identity failed (a test failure).
bool admissible_count_identity_check(const AdmissibleProfile& profile);

/// One admissible tuple mod P(z), stored as its list of per-prime residues.
struct AdmissibleTuple {
  std::vector<std::int64_t> primes;
  std::vector<std::vector<std::int64_t>> residues;  // residues[k] in F_{p_k}^d

  /// CRT-combined residues mod prod(primes); fails if the modulus would
  /// exceed the signed 64-bit range.
  std::vector<std::int64_t> crt(std::int64_t* modulus_out = nullptr) const;
};

/// Uniform sample from A. Per prime: rejection sampling against the
/// admissibility predicate, or direct enumeration when the admissible
/// density falls below 1/8.
AdmissibleTuple sample_admissible(const AdmissibleProfile& profile,
                                  std::mt19937_64& rng);

/// The exact admissible set mod one prime (enumeration budget applies).
std::vector<std::vector<std::int64_t>> enumerate_admissible(
    const LinearSystem& system, std::int64_t p);

}  // namespace maierlab

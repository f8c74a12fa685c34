#pragma once

#include <cstdint>
#include <vector>

#include "maierlab/linear_forms.hpp"
#include "maierlab/numeric.hpp"

namespace maierlab {

/// Exact local density at one prime.
struct LocalDensity {
  std::int64_t prime = 0;
  Rational value;  // p^{-d} (p/(p-1))^t #{x in F_p^d : all forms nonzero}
};

/// Truncated Euler product with a rigorous multiplicative tail interval:
/// the untruncated product lies in
/// [value / (1 + tail_bound), value * (1 + tail_bound)].
struct SingularSeries {
  HighFloat truncated_value;
  std::int64_t cutoff = 0;
  double tail_bound = 0.0;

  double value() const { return static_cast<double>(truncated_value); }
};

/// Enumeration budget: brute force over F_p^d only while p^d stays below this.
inline constexpr std::int64_t kEnumerationBudget = 10'000'000;

/// #{x in F_p^d : psi_i(x) != 0 mod p for all i}. Chooses enumeration under
/// the budget, inclusion-exclusion over form subsets otherwise.
BigInt nonvanishing_count(const LinearSystem& system, std::int64_t p);

/// Enumeration path only (BUDGET_EXCEEDED above kEnumerationBudget).
BigInt nonvanishing_count_enumerate(const LinearSystem& system, std::int64_t p);

/// Inclusion-exclusion path: each form subset contributes (-1)^|S| p^{d-rank}
/// when the affine system S = 0 is consistent mod p, else 0.
BigInt nonvanishing_count_subsets(const LinearSystem& system, std::int64_t p);

LocalDensity beta_p(const LinearSystem& system, std::int64_t p);

/// Exact rational product of beta_p over p <= z.
Rational singular_series_head(const LinearSystem& system, std::int64_t z);

/// Primes p where some form vanishes identically mod p or some pair of
/// homogeneous parts becomes dependent mod p (divisors of coefficient
/// contents and pairwise 2x2 minor gcds). Sorted ascending.
std::vector<std::int64_t> bad_primes(const LinearSystem& system);

/// Tail constant C with |beta_p - 1| <= C / p^2 for good primes p > t.
/// Derivation in docs/tail_bound.md.
double tail_constant(const LinearSystem& system);

/// prod_{p<=z} beta_p in high precision, with tail interval from the good-
/// prime bound. CUTOFF_TOO_SMALL when z is below the largest bad prime.
SingularSeries singular_series(const LinearSystem& system, std::int64_t z,
                               int threads = 0);

/// Ternary Goldbach series S(N) truncated at z: factors 1 - 1/(p-1)^2 at
/// p | N and 1 + 1/(p-1)^3 at p not dividing N. Prime divisors of N above z
/// are folded in exactly, so the tail interval only covers p > z, p not | N.
SingularSeries vinogradov_S(std::int64_t N, std::int64_t z);

}  // namespace maierlab

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive: trial division, direct loops, and
// closed forms, with no shared code paths with the library under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "maierlab/linear_forms.hpp"

namespace oracles {

inline bool is_prime_td(std::int64_t n) {
  n = std::llabs(n);
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<char> simple_sieve(std::int64_t limit) {
  std::vector<char> is_p(static_cast<size_t>(limit + 1), 1);
  is_p[0] = 0;
  if (limit >= 1) is_p[1] = 0;
  for (std::int64_t n = 2; n * n <= limit; ++n)
    if (is_p[static_cast<size_t>(n)])
      for (std::int64_t m = n * n; m <= limit; m += n) is_p[static_cast<size_t>(m)] = 0;
  return is_p;
}

inline bool is_rough_td(std::int64_t n, std::int64_t z) {
  if (n == 0) return false;
  n = std::llabs(n);
  for (std::int64_t p = 2; p <= z; ++p) {
    if (!is_prime_td(p)) continue;
    if (n % p == 0) return false;
  }
  return true;
}

/// Ordered pairs (p1, p2) of primes with N - p1 - p2 a (positive) prime.
inline std::uint64_t goldbach_triple_loop(std::int64_t N) {
  std::uint64_t total = 0;
  for (std::int64_t p1 = 2; p1 < N; ++p1) {
    if (!is_prime_td(p1)) continue;
    for (std::int64_t p2 = 2; p1 + p2 < N; ++p2)
      if (is_prime_td(p2) && is_prime_td(N - p1 - p2)) ++total;
  }
  return total;
}

/// Closed form for the Buchstab function on [2, 3].
inline double omega_closed(double u) { return (1.0 + std::log(u - 1.0)) / u; }

/// Per-point pattern count over a box, with trial division only.
inline std::uint64_t pattern_count_td(const maierlab::LinearSystem& sys,
                                      const std::vector<std::int64_t>& lo,
                                      const std::vector<std::int64_t>& side,
                                      bool rough, std::int64_t z) {
  int d = sys.dimension();
  std::uint64_t hits = 0;
  std::vector<std::int64_t> idx(static_cast<size_t>(d), 0);
  for (;;) {
    std::vector<std::int64_t> x(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) x[static_cast<size_t>(j)] = lo[static_cast<size_t>(j)] + idx[static_cast<size_t>(j)];
    bool ok = true;
    for (const auto& f : sys.forms()) {
      std::int64_t v = f.evaluate(x);
      if (rough ? !is_rough_td(v, z) : !is_prime_td(v)) {
        ok = false;
        break;
      }
    }
    if (ok) ++hits;
    int j = 0;
    while (j < d && ++idx[static_cast<size_t>(j)] == side[static_cast<size_t>(j)])
      idx[static_cast<size_t>(j++)] = 0;
    if (j == d) break;
  }
  return hits;
}

/// Random finite-complexity system with d <= 3, t <= 4, small coefficients.
inline maierlab::LinearSystem random_finite_system(std::mt19937_64& rng,
                                                   int max_d = 3, int max_t = 4) {
  std::uniform_int_distribution<int> d_dist(1, max_d), t_dist(1, max_t);
  std::uniform_int_distribution<std::int64_t> coeff(-3, 3), cst(-10, 10);
  for (;;) {
    int d = d_dist(rng), t = t_dist(rng);
    std::vector<maierlab::LinearForm> forms;
    bool bad = false;
    for (int i = 0; i < t && !bad; ++i) {
      std::vector<std::int64_t> c(static_cast<size_t>(d));
      for (int tries = 0;; ++tries) {
        for (auto& v : c) v = coeff(rng);
        bool nonzero = false;
        for (auto v : c) nonzero |= v != 0;
        if (nonzero) break;
        if (tries > 50) {
          bad = true;
          break;
        }
      }
      if (!bad) forms.emplace_back(c, cst(rng));
    }
    if (bad) continue;
    maierlab::LinearSystem sys(std::move(forms));
    if (maierlab::is_finite_complexity(sys)) return sys;
  }
}

}  // namespace oracles

#include "maierlab/admissible.hpp"

#include <cmath>

#include "maierlab/local_densities.hpp"
#include "maierlab/sieve.hpp"

namespace maierlab {

AdmissibleProfile build_profile(const LinearSystem& system, std::int64_t z) {
  if (z < 2) fail(errc::range_error, "build_profile needs z >= 2");
  AdmissibleProfile profile{system, z, {}, false};
  for (std::int64_t p : primes_up_to(z)) {
    BigInt c = nonvanishing_count(system, p);
    if (c == 0) profile.degenerate = true;
    profile.per_prime_counts.emplace_back(p, std::move(c));
  }
  return profile;
}

bool admissible_count_identity_check(const AdmissibleProfile& profile) {
  int d = profile.system.dimension();
  int t = profile.system.size();
  for (const auto& [p, count] : profile.per_prime_counts) {
    Rational beta = beta_p(profile.system, p).value;
    Rational expected = beta;
    for (int j = 0; j < d; ++j) expected *= p;
    for (int i = 0; i < t; ++i) expected *= Rational(p - 1, p);
    if (expected != Rational(count)) return false;
  }
  return true;
}

std::vector<std::int64_t> AdmissibleTuple::crt(std::int64_t* modulus_out) const {
  __int128 q = 1;
  for (std::int64_t p : primes) {
    q *= p;
    if (q > INT64_MAX)
      fail(errc::overflow, "CRT modulus exceeds the signed 64-bit range");
  }
  std::int64_t Q = static_cast<std::int64_t>(q);
  size_t d = residues.empty() ? 0 : residues[0].size();
  std::vector<std::int64_t> out(d, 0);
  for (size_t j = 0; j < d; ++j) {
    // Incremental CRT over the prime list.
    std::int64_t x = 0, m = 1;
    for (size_t k = 0; k < primes.size(); ++k) {
      std::int64_t p = primes[k];
      std::int64_t r = residues[k][j];
      // solve x + m*s == r (mod p)
      std::int64_t minv = 1;
      {
        std::int64_t mm = ((m % p) + p) % p, acc = 1, e = p - 2, b = mm;
        while (e) {
          if (e & 1) acc = static_cast<std::int64_t>(static_cast<__int128>(acc) * b % p);
          b = static_cast<std::int64_t>(static_cast<__int128>(b) * b % p);
          e >>= 1;
        }
        minv = acc;
      }
      std::int64_t s = static_cast<std::int64_t>(
          ((static_cast<__int128>(r - x % p + p) % p) * minv) % p);
      x = static_cast<std::int64_t>(x + static_cast<__int128>(m) * s);
      m *= p;
    }
    out[j] = ((x % Q) + Q) % Q;
  }
  if (modulus_out) *modulus_out = Q;
  return out;
}

AdmissibleTuple sample_admissible(const AdmissibleProfile& profile,
                                  std::mt19937_64& rng) {
  if (profile.degenerate)
    fail(errc::degenerate_profile, "no admissible tuples exist for this z");
  const LinearSystem& sys = profile.system;
  int d = sys.dimension();
  AdmissibleTuple tuple;
  for (const auto& [p, count] : profile.per_prime_counts) {
    tuple.primes.push_back(p);
    double pd = std::pow(static_cast<double>(p), d);
    double density = static_cast<double>(count) / pd;
    std::vector<std::int64_t> x(static_cast<size_t>(d));
    if (density < 0.125) {
      auto all = enumerate_admissible(sys, p);
      std::uniform_int_distribution<size_t> pick(0, all.size() - 1);
      x = all[pick(rng)];
    } else {
      std::uniform_int_distribution<std::int64_t> coord(0, p - 1);
      for (;;) {
        for (auto& xi : x) xi = coord(rng);
        bool ok = true;
        for (const auto& f : sys.forms())
          if (f.evaluate_mod(x, p) == 0) {
            ok = false;
            break;
          }
        if (ok) break;
      }
    }
    tuple.residues.push_back(std::move(x));
  }
  return tuple;
}

std::vector<std::vector<std::int64_t>> enumerate_admissible(
    const LinearSystem& system, std::int64_t p) {
  int d = system.dimension();
  double pd = std::pow(static_cast<double>(p), d);
  if (pd > static_cast<double>(kEnumerationBudget))
    fail(errc::budget_exceeded, "p^d exceeds the enumeration budget");
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> x(static_cast<size_t>(d), 0);
  for (;;) {
    bool ok = true;
    for (const auto& f : system.forms())
      if (f.evaluate_mod(x, p) == 0) {
        ok = false;
        break;
      }
    if (ok) out.push_back(x);
    int j = 0;
    while (j < d && ++x[static_cast<size_t>(j)] == p) x[static_cast<size_t>(j++)] = 0;
    if (j == d) break;
  }
  return out;
}

}  // namespace maierlab

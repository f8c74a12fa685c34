#include "maierlab/local_densities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "maierlab/parallel.hpp"
#include "maierlab/sieve.hpp"

namespace maierlab {

namespace {

std::int64_t pow_checked(std::int64_t base, int exp, std::int64_t limit) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
  __int128 r = 1, b = a % m;
  if (b < 0) b += m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t invmod(std::int64_t a, std::int64_t p) { return powmod(a, p - 2, p); }

// Reduced row echelon pass mod p. Returns {rank, consistent} for the system
// rows * x = rhs.
struct EchelonResult {
  int rank;
  bool consistent;
};

EchelonResult solve_mod_p(std::vector<std::vector<std::int64_t>> rows,
                          std::vector<std::int64_t> rhs, std::int64_t p) {
  size_t nr = rows.size();
  size_t nc = nr ? rows[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < nc && r < nr; ++c) {
    size_t piv = r;
    while (piv < nr && rows[piv][c] % p == 0) ++piv;
    if (piv == nr) continue;
    std::swap(rows[piv], rows[r]);
    std::swap(rhs[piv], rhs[r]);
    std::int64_t inv = invmod(((rows[r][c] % p) + p) % p, p);
    for (size_t i = r + 1; i < nr; ++i) {
      std::int64_t f = ((rows[i][c] % p) + p) % p;
      if (f == 0) continue;
      std::int64_t mul = static_cast<std::int64_t>(
          static_cast<__int128>(f) * inv % p);
      for (size_t j = c; j < nc; ++j)
        rows[i][j] = static_cast<std::int64_t>(
            ((static_cast<__int128>(rows[i][j]) -
              static_cast<__int128>(mul) * rows[r][j]) % p + p) % p);
      rhs[i] = static_cast<std::int64_t>(
          ((static_cast<__int128>(rhs[i]) -
            static_cast<__int128>(mul) * rhs[r]) % p + p) % p);
    }
    ++r;
  }
  for (size_t i = r; i < nr; ++i)
    if (((rhs[i] % p) + p) % p != 0) return {static_cast<int>(r), false};
  return {static_cast<int>(r), true};
}

using u128 = unsigned __int128;

u128 gcd_u128(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 abs_i128(__int128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  std::uint64_t x = 2, y = 2, d = 1, c = 1;
  auto f = [&](std::uint64_t v) {
    return static_cast<std::uint64_t>((static_cast<u128>(v) * v + c) % n);
  };
  while (d == 1) {
    x = f(x);
    y = f(f(y));
    std::uint64_t diff = x > y ? x - y : y - x;
    d = std::gcd(diff, n);
    if (d == n) {
      ++c;
      x = y = 2;
      d = 1;
    }
  }
  return d;
}

void factor_into(std::uint64_t n, std::set<std::int64_t>& out) {
  if (n <= 1) return;
  if (is_prime_u64(n)) {
    out.insert(static_cast<std::int64_t>(n));
    return;
  }
  for (std::uint64_t p = 2; p * p <= n && p <= 100000; ++p) {
    if (n % p == 0) {
      out.insert(static_cast<std::int64_t>(p));
      while (n % p == 0) n /= p;
      factor_into(n, out);
      return;
    }
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

BigInt nonvanishing_count_enumerate(const LinearSystem& system, std::int64_t p) {
  int d = system.dimension();
  int t = system.size();
  if (pow_checked(p, d, kEnumerationBudget) > kEnumerationBudget)
    fail(errc::budget_exceeded, "p^d exceeds the enumeration budget");

  // Odometer over F_p^d with incremental per-form residues.
  std::vector<std::int64_t> x(static_cast<size_t>(d), 0);
  std::vector<std::int64_t> vals(static_cast<size_t>(t));
  for (int i = 0; i < t; ++i)
    vals[static_cast<size_t>(i)] = ((system.form(i).constant % p) + p) % p;
  std::vector<std::vector<std::int64_t>> c(static_cast<size_t>(t));
  for (int i = 0; i < t; ++i) {
    c[static_cast<size_t>(i)].resize(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      c[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          ((system.form(i).coefficients[static_cast<size_t>(j)] % p) + p) % p;
  }
  BigInt count = 0;
  for (;;) {
    bool ok = true;
    for (int i = 0; i < t; ++i)
      if (vals[static_cast<size_t>(i)] == 0) {
        ok = false;
        break;
      }
    if (ok) ++count;
    int j = 0;
    while (j < d) {
      ++x[static_cast<size_t>(j)];
      for (int i = 0; i < t; ++i) {
        vals[static_cast<size_t>(i)] += c[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (vals[static_cast<size_t>(i)] >= p) vals[static_cast<size_t>(i)] -= p;
      }
      if (x[static_cast<size_t>(j)] < p) break;
      // wrap: after p increments the residue is back where it started
      x[static_cast<size_t>(j)] = 0;
      ++j;
    }
    if (j == d) break;
  }
  return count;
}

BigInt nonvanishing_count_subsets(const LinearSystem& system, std::int64_t p) {
  int d = system.dimension();
  int t = system.size();
  BigInt total = 0;
  for (unsigned mask = 0; mask < (1u << t); ++mask) {
    int bits = __builtin_popcount(mask);
    if (mask == 0) {
      BigInt term = 1;
      for (int j = 0; j < d; ++j) term *= p;
      total += term;
      continue;
    }
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<std::int64_t> rhs;
    for (int i = 0; i < t; ++i) {
      if (!(mask & (1u << i))) continue;
      rows.push_back(system.form(i).coefficients);
      rhs.push_back(((-system.form(i).constant) % p + p) % p);
    }
    auto [rank, consistent] = solve_mod_p(std::move(rows), std::move(rhs), p);
    if (!consistent) continue;
    BigInt term = 1;
    for (int j = 0; j < d - rank; ++j) term *= p;
    if (bits & 1)
      total -= term;
    else
      total += term;
  }
  return total;
}

BigInt nonvanishing_count(const LinearSystem& system, std::int64_t p) {
  if (pow_checked(p, system.dimension(), kEnumerationBudget) <= kEnumerationBudget)
    return nonvanishing_count_enumerate(system, p);
  return nonvanishing_count_subsets(system, p);
}

LocalDensity beta_p(const LinearSystem& system, std::int64_t p) {
  BigInt count = nonvanishing_count(system, p);
  BigInt num = count;
  BigInt den = 1;
  for (int i = 0; i < system.size(); ++i) {
    num *= p;
    den *= (p - 1);
  }
  for (int j = 0; j < system.dimension(); ++j) den *= p;
  return {p, Rational(num, den)};
}

Rational singular_series_head(const LinearSystem& system, std::int64_t z) {
  Rational prod = 1;
  for (std::int64_t p : primes_up_to(z)) prod *= beta_p(system, p).value;
  return prod;
}

std::vector<std::int64_t> bad_primes(const LinearSystem& system) {
  std::set<std::int64_t> bad;
  const auto& forms = system.forms();
  for (const auto& f : forms) {
    std::uint64_t g = 0;
    for (std::int64_t cf : f.coefficients)
      g = std::gcd(g, static_cast<std::uint64_t>(std::llabs(cf)));
    factor_into(g, bad);
  }
  int d = system.dimension();
  for (size_t i = 0; i < forms.size(); ++i) {
    for (size_t j = i + 1; j < forms.size(); ++j) {
      u128 g = 0;
      for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
          __int128 m =
              static_cast<__int128>(forms[i].coefficients[static_cast<size_t>(a)]) *
                  forms[j].coefficients[static_cast<size_t>(b)] -
              static_cast<__int128>(forms[i].coefficients[static_cast<size_t>(b)]) *
                  forms[j].coefficients[static_cast<size_t>(a)];
          g = gcd_u128(g, abs_i128(m));
        }
      if (d == 1) {
        // In d = 1 the pair (a), (b) is dependent over Q; finite-complexity
        // callers never reach here.
        continue;
      }
      if (g == 0)
        fail(errc::range_error,
             "pairwise dependent homogeneous parts: system has infinite complexity");
      factor_into(static_cast<std::uint64_t>(g), bad);
    }
  }
  return {bad.begin(), bad.end()};
}

double tail_constant(const LinearSystem& system) {
  double t = system.size();
  return t * t + t;
}

SingularSeries singular_series(const LinearSystem& system, std::int64_t z,
                               int threads) {
  if (!is_finite_complexity(system))
    fail(errc::range_error, "singular series needs a finite-complexity system");
  auto bad = bad_primes(system);
  std::int64_t largest_bad = bad.empty() ? 0 : bad.back();
  double c = tail_constant(system);
  if (z < largest_bad)
    fail(errc::cutoff_too_small,
         "cutoff below the largest bad prime " + std::to_string(largest_bad));
  if (static_cast<double>(z) * static_cast<double>(z) <= c)
    fail(errc::cutoff_too_small, "cutoff too small for the tail constant");

  auto ps = primes_up_to(z);
  std::vector<Rational> factors(ps.size());
  parallel_chunks(static_cast<std::int64_t>(ps.size()), threads,
                  [&](std::int64_t, std::int64_t b, std::int64_t e) {
                    for (std::int64_t i = b; i < e; ++i)
                      factors[static_cast<size_t>(i)] =
                          beta_p(system, ps[static_cast<size_t>(i)]).value;
                  });
  HighFloat value = 1;
  for (const auto& f : factors)  // ascending p: order fixed regardless of threads
    value *= HighFloat(numerator(f)) / HighFloat(denominator(f));

  // Tail: |beta_p - 1| <= c/p^2 for good p > z. Sum c/p^2 explicitly over a
  // prime table window, then bound the rest by the integral tail c/M.
  std::int64_t window = std::max<std::int64_t>(4 * z, z + 200000);
  double sum = 0.0;
  for (std::int64_t p : primes_up_to(window))
    if (p > z) sum += c / (static_cast<double>(p) * static_cast<double>(p));
  sum += c / static_cast<double>(window);
  double delta_max = c / (static_cast<double>(z) * static_cast<double>(z));
  double tb = std::expm1(sum / (1.0 - delta_max));
  return {value, z, tb};
}

SingularSeries vinogradov_S(std::int64_t N, std::int64_t z) {
  if (N < 3) fail(errc::range_error, "vinogradov_S needs N >= 3");
  if (N % 2 == 0)
    fail(errc::even_n, "the p=2 factor 1 - 1/(p-1)^2 vanishes for even N");
  if (z < 2) fail(errc::range_error, "cutoff must be >= 2");

  std::set<std::int64_t> divisors;
  factor_into(static_cast<std::uint64_t>(N), divisors);

  HighFloat value = 1;
  for (std::int64_t p : primes_up_to(z)) {
    HighFloat pm1 = p - 1;
    if (N % p == 0)
      value *= 1 - 1 / (pm1 * pm1);
    else
      value *= 1 + 1 / (pm1 * pm1 * pm1);
  }
  // Prime divisors of N beyond the cutoff contribute exactly.
  for (std::int64_t q : divisors) {
    if (q <= z) continue;
    HighFloat qm1 = q - 1;
    value *= 1 - 1 / (qm1 * qm1);
  }

  std::int64_t window = std::max<std::int64_t>(2 * z, z + 200000);
  double sum = 0.0;
  for (std::int64_t p : primes_up_to(window)) {
    if (p <= z || N % p == 0) continue;
    double pm1 = static_cast<double>(p - 1);
    sum += 1.0 / (pm1 * pm1 * pm1);
  }
  sum += 0.5 / (static_cast<double>(window - 1) * static_cast<double>(window - 1));
  return {value, z, std::expm1(sum)};
}

}  // namespace maierlab

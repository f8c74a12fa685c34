#include "maierlab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "maierlab/parallel.hpp"

namespace maierlab {

std::vector<std::int64_t> primes_up_to(std::int64_t z) {
  if (z < 2) fail(errc::range_error, "primes_up_to needs z >= 2");
  std::vector<bool> comp(static_cast<size_t>(z + 1), false);
  std::vector<std::int64_t> out;
  for (std::int64_t n = 2; n <= z; ++n) {
    if (comp[static_cast<size_t>(n)]) continue;
    out.push_back(n);
    for (std::int64_t m = n * n; m <= z; m += n) comp[static_cast<size_t>(m)] = true;
  }
  return out;
}

namespace {

constexpr std::int64_t kMaxWidth = std::int64_t{1} << 30;
constexpr std::int64_t kMaxBasePrimeLimit = std::int64_t{1} << 26;

std::int64_t first_multiple_at_least(std::int64_t p, std::int64_t lo) {
  std::int64_t q = lo / p;
  std::int64_t m = q * p;
  if (m < lo) m += p;
  return m;
}

// Base primes up to `limit`, memoized on disk under $MAIER_LAB_CACHE when set.
// Small limits are cheap to regenerate, so only larger tables hit the cache.
std::vector<std::int64_t> base_primes(std::int64_t limit) {
  const char* dir = std::getenv("MAIER_LAB_CACHE");
  if (dir == nullptr || limit < (std::int64_t{1} << 16)) return primes_up_to(limit);
  std::string path =
      std::string(dir) + "/base_primes_" + std::to_string(limit) + ".u64";
  if (std::FILE* f = std::fopen(path.c_str(), "rb")) {
    std::vector<std::int64_t> cached;
    std::int64_t p;
    while (std::fread(&p, sizeof p, 1, f) == 1) cached.push_back(p);
    std::fclose(f);
    if (!cached.empty() && cached.front() == 2) return cached;
  }
  auto primes = primes_up_to(limit);
  std::string tmp = path + ".tmp";
  if (std::FILE* f = std::fopen(tmp.c_str(), "wb")) {
    std::fwrite(primes.data(), sizeof primes[0], primes.size(), f);
    std::fclose(f);
    std::rename(tmp.c_str(), path.c_str());
  }
  return primes;
}

}  // namespace

SegmentedSieve::SegmentedSieve(std::int64_t lo, std::int64_t hi, SieveMode mode,
                               std::int64_t z)
    : lo_(lo), hi_(hi), mode_(mode), z_(z) {
  if (hi <= lo) fail(errc::range_error, "empty sieve range");
  if (hi - lo > kMaxWidth) fail(errc::range_too_wide, "sieve range exceeds 2^30");
  bits_.assign(static_cast<size_t>((hi - lo + 63) / 64), ~std::uint64_t{0});
  // Trim bits beyond hi-1 so count() over the full range is exact.
  std::uint64_t width = static_cast<std::uint64_t>(hi - lo);
  if (width % 64) bits_.back() &= (~std::uint64_t{0}) >> (64 - width % 64);
}

SegmentedSieve SegmentedSieve::primes(std::int64_t lo, std::int64_t hi,
                                      int threads) {
  SegmentedSieve s(lo, hi, SieveMode::prime, 0);
  std::int64_t maxabs = std::max(std::llabs(lo), std::llabs(hi - 1));
  std::int64_t root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(maxabs))) + 2;
  if (root > kMaxBasePrimeLimit)
    fail(errc::base_primes_insufficient,
         "range magnitude needs base primes beyond 2^26");
  auto base = base_primes(std::max<std::int64_t>(root, 2));

  auto clear_bit = [&s, lo](std::int64_t n) {
    std::uint64_t i = static_cast<std::uint64_t>(n - lo);
    s.bits_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  };

  // Word-aligned chunks so concurrent marking never touches the same word.
  std::int64_t nwords = static_cast<std::int64_t>(s.bits_.size());
  parallel_chunks(nwords, threads, [&](std::int64_t, std::int64_t wb, std::int64_t we) {
    std::int64_t seg_lo = lo + wb * 64;
    std::int64_t seg_hi = std::min(hi, lo + we * 64);
    for (std::int64_t n = std::max(seg_lo, std::int64_t{-1});
         n <= 1 && n < seg_hi; ++n)
      if (n >= seg_lo) clear_bit(n);
    for (std::int64_t p : base) {
      for (std::int64_t m = first_multiple_at_least(p, seg_lo); m < seg_hi; m += p) {
        if (m == p || m == -p) continue;
        clear_bit(m);
      }
    }
  });
  return s;
}

SegmentedSieve SegmentedSieve::rough(std::int64_t lo, std::int64_t hi,
                                     std::int64_t z, int threads) {
  if (z < 2) fail(errc::range_error, "rough sieve needs z >= 2");
  SegmentedSieve s(lo, hi, SieveMode::rough, z);
  auto zp = primes_up_to(z);
  auto clear_bit = [&s, lo](std::int64_t n) {
    std::uint64_t i = static_cast<std::uint64_t>(n - lo);
    s.bits_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  };
  std::int64_t nwords = static_cast<std::int64_t>(s.bits_.size());
  parallel_chunks(nwords, threads, [&](std::int64_t, std::int64_t wb, std::int64_t we) {
    std::int64_t seg_lo = lo + wb * 64;
    std::int64_t seg_hi = std::min(hi, lo + we * 64);
    for (std::int64_t p : zp)
      for (std::int64_t m = first_multiple_at_least(p, seg_lo); m < seg_hi; m += p)
        clear_bit(m);  // gcd(0, P(z)) = P(z), so 0 drops out here too
  });
  return s;
}

SegmentedSieve sieve_range(std::int64_t lo, std::int64_t hi, SieveMode mode,
                           std::int64_t z, int threads) {
  return mode == SieveMode::prime ? SegmentedSieve::primes(lo, hi, threads)
                                  : SegmentedSieve::rough(lo, hi, z, threads);
}

std::uint64_t SegmentedSieve::count(std::int64_t a, std::int64_t b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (b <= a) return 0;
  std::uint64_t ia = static_cast<std::uint64_t>(a - lo_);
  std::uint64_t ib = static_cast<std::uint64_t>(b - lo_);
  std::uint64_t wa = ia >> 6, wb = (ib - 1) >> 6;
  std::uint64_t mask_a = (~std::uint64_t{0}) << (ia & 63);
  std::uint64_t mask_b = (~std::uint64_t{0}) >> (63 - ((ib - 1) & 63));
  if (wa == wb) return static_cast<std::uint64_t>(__builtin_popcountll(bits_[wa] & mask_a & mask_b));
  std::uint64_t total = static_cast<std::uint64_t>(__builtin_popcountll(bits_[wa] & mask_a));
  for (std::uint64_t w = wa + 1; w < wb; ++w)
    total += static_cast<std::uint64_t>(__builtin_popcountll(bits_[w]));
  total += static_cast<std::uint64_t>(__builtin_popcountll(bits_[wb] & mask_b));
  return total;
}

std::uint64_t rough_count(std::int64_t x, std::int64_t z, int threads) {
  if (z > x) fail(errc::range_error, "rough_count needs z <= x");
  constexpr std::int64_t kChunk = std::int64_t{1} << 26;
  std::uint64_t total = 0;
  for (std::int64_t lo = 1; lo <= x; lo += kChunk) {
    std::int64_t hi = std::min(x + 1, lo + kChunk);
    total += SegmentedSieve::rough(lo, hi, z, threads).count();
  }
  return total;
}

std::uint64_t prime_count(std::int64_t lo, std::int64_t hi, int threads) {
  constexpr std::int64_t kChunk = std::int64_t{1} << 26;
  std::uint64_t total = 0;
  for (std::int64_t a = lo; a < hi; a += kChunk) {
    std::int64_t b = std::min(hi, a + kChunk);
    total += SegmentedSieve::primes(a, b, threads).count();
  }
  return total;
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This base set is deterministic for all n < 3.3e24.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace maierlab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "maierlab/sieve.hpp"
#include "oracles.hpp"

using namespace maierlab;

TEST_CASE("primes_up_to basics") {
  CHECK(primes_up_to(10) == std::vector<std::int64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(2) == std::vector<std::int64_t>{2});
  CHECK(primes_up_to(1'000'000).size() == 78498);
}

TEST_CASE("prime counts match the simple-sieve oracle") {
  auto oracle = oracles::simple_sieve(2'000'000);
  std::uint64_t pi1 = 0, pi2 = 0;
  for (std::int64_t n = 2; n <= 1'000'000; ++n) pi1 += oracle[static_cast<size_t>(n)];
  for (std::int64_t n = 1'000'001; n <= 2'000'000; ++n) pi2 += oracle[static_cast<size_t>(n)];
  CHECK(pi1 == 78498);
  CHECK(pi2 == 70435);
  CHECK(prime_count(2, 1'000'001) == pi1);
  CHECK(prime_count(1'000'001, 2'000'001) == pi2);
}

TEST_CASE("prime bits on small ranges") {
  auto s = SegmentedSieve::primes(10, 20);
  std::vector<std::int64_t> got;
  for (std::int64_t n = 10; n < 20; ++n)
    if (s.test(n)) got.push_back(n);
  CHECK(got == std::vector<std::int64_t>{11, 13, 17, 19});
}

TEST_CASE("negative ranges follow the |n| convention") {
  auto s = SegmentedSieve::primes(-25, 5);
  CHECK(s.test(-23));
  CHECK(s.test(-2));
  CHECK(s.test(2));
  CHECK_FALSE(s.test(-1));
  CHECK_FALSE(s.test(0));
  CHECK_FALSE(s.test(1));
  CHECK_FALSE(s.test(-21));
  for (std::int64_t n = -25; n < 5; ++n)
    CHECK(s.test(n) == oracles::is_prime_td(n));
}

TEST_CASE("rough mode matches a direct gcd oracle") {
  auto s = SegmentedSieve::rough(1, 30, 5);
  std::vector<std::int64_t> got;
  for (std::int64_t n = 1; n < 30; ++n)
    if (s.test(n)) got.push_back(n);
  CHECK(got == std::vector<std::int64_t>{1, 7, 11, 13, 17, 19, 23, 29});
  auto neg = SegmentedSieve::rough(-30, 30, 7);
  for (std::int64_t n = -30; n < 30; ++n)
    CHECK(neg.test(n) == oracles::is_rough_td(n, 7));
}

TEST_CASE("rough_count values") {
  CHECK(rough_count(30, 5) == 8);
  // z = 2 leaves the odd numbers.
  CHECK(rough_count(1001, 2) == 501);
}

TEST_CASE("segment concatenation is bit-exact") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> start(-5000, 5000);
  for (int trial = 0; trial < 20; ++trial) {
    std::int64_t a = start(rng);
    std::int64_t b = a + 1 + static_cast<std::int64_t>(rng() % 400);
    std::int64_t c = b + 1 + static_cast<std::int64_t>(rng() % 400);
    auto whole = SegmentedSieve::primes(a, c);
    auto left = SegmentedSieve::primes(a, b);
    auto right = SegmentedSieve::primes(b, c);
    for (std::int64_t n = a; n < c; ++n)
      CHECK(whole.test(n) == (n < b ? left.test(n) : right.test(n)));
  }
}

TEST_CASE("rough bits dominate prime bits beyond z") {
  auto pr = SegmentedSieve::primes(100, 2000);
  auto ro = SegmentedSieve::rough(100, 2000, 13);
  for (std::int64_t n = 100; n < 2000; ++n)
    if (pr.test(n)) CHECK(ro.test(n));
}

TEST_CASE("prime mode agrees with deterministic Miller-Rabin") {
  std::mt19937_64 rng(2718281828);
  auto s = SegmentedSieve::primes(1'000'000'000, 1'000'100'000);
  for (int i = 0; i < 10'000; ++i) {
    std::int64_t n = 1'000'000'000 + static_cast<std::int64_t>(rng() % 100'000);
    CHECK(s.test(n) == is_prime_u64(static_cast<std::uint64_t>(n)));
  }
}

TEST_CASE("range guards") {
  CHECK_THROWS_WITH_AS(SegmentedSieve::primes(0, (std::int64_t{1} << 30) + 65),
                       doctest::Contains("RANGE_TOO_WIDE"), Error);
  CHECK_THROWS_WITH_AS(SegmentedSieve::primes(std::int64_t{1} << 55,
                                              (std::int64_t{1} << 55) + 10),
                       doctest::Contains("BASE_PRIMES_INSUFFICIENT"), Error);
  auto s = SegmentedSieve::primes(10, 20);
  CHECK_THROWS_WITH_AS(s.test(20), doctest::Contains("OUT_OF_RANGE"), Error);
}

TEST_CASE("base-prime cache round-trips through MAIER_LAB_CACHE") {
  std::string dir = "./cache_test_dir";
  std::system(("mkdir -p " + dir).c_str());
  setenv("MAIER_LAB_CACHE", dir.c_str(), 1);
  auto first = SegmentedSieve::primes(4'000'000'000'000LL, 4'000'000'001'000LL);
  auto second = SegmentedSieve::primes(4'000'000'000'000LL, 4'000'000'001'000LL);
  unsetenv("MAIER_LAB_CACHE");
  auto plain = SegmentedSieve::primes(4'000'000'000'000LL, 4'000'000'001'000LL);
  for (std::int64_t n = 4'000'000'000'000LL; n < 4'000'000'001'000LL; ++n) {
    CHECK(first.test(n) == plain.test(n));
    CHECK(second.test(n) == plain.test(n));
  }
}

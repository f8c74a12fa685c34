#include "maierlab/patterns.hpp"

#include <algorithm>
#include <cmath>

#include "maierlab/parallel.hpp"

namespace maierlab {

Box::Box(std::vector<std::int64_t> lo_, std::vector<std::int64_t> side_)
    : lo(std::move(lo_)), side(std::move(side_)) {
  if (lo.empty() || lo.size() != side.size())
    fail(errc::range_error, "box needs matching lo/side vectors, d >= 1");
  __int128 vol = 1;
  for (std::int64_t h : side) {
    if (h < 1) fail(errc::range_error, "box side lengths must be >= 1");
    vol *= h;
    if (vol > INT64_MAX) fail(errc::overflow, "box volume exceeds 2^63");
  }
}

std::int64_t Box::volume() const {
  std::int64_t v = 1;
  for (std::int64_t h : side) v *= h;
  return v;
}

namespace {

struct FormRange {
  std::int64_t lo, hi;  // value range [lo, hi] over the grid
};

FormRange form_range(const LinearForm& form, std::span<const std::int64_t> base,
                     std::span<const std::int64_t> counts, std::int64_t stride) {
  __int128 lo = form.constant, hi = form.constant;
  for (size_t j = 0; j < base.size(); ++j) {
    __int128 c = form.coefficients[j];
    __int128 at_base = c * base[j];
    __int128 at_end = c * (base[j] + stride * (counts[j] - 1));
    lo += std::min(at_base, at_end);
    hi += std::max(at_base, at_end);
  }
  if (lo < -INT64_MAX || hi > INT64_MAX)
    fail(errc::overflow, "form values exceed the 63-bit range on this grid");
  return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

}  // namespace

std::vector<SegmentedSieve> build_form_sieves(
    const LinearSystem& system, std::span<const std::int64_t> base,
    std::span<const std::int64_t> counts, std::int64_t stride, SieveMode mode,
    std::int64_t z, int threads) {
  std::vector<SegmentedSieve> sieves;
  sieves.reserve(static_cast<size_t>(system.size()));
  for (const auto& form : system.forms()) {
    auto [lo, hi] = form_range(form, base, counts, stride);
    sieves.push_back(sieve_range(lo, hi + 1, mode, z, threads));
  }
  return sieves;
}

std::uint64_t count_patterns_on_grid(const LinearSystem& system,
                                     std::span<const std::int64_t> base,
                                     std::span<const std::int64_t> counts,
                                     std::int64_t stride,
                                     const std::vector<SegmentedSieve>& sieves,
                                     int threads) {
  int d = system.dimension();
  int t = system.size();
  if (static_cast<int>(base.size()) != d || static_cast<int>(counts.size()) != d)
    fail(errc::range_error, "grid dimension mismatch");
  for (std::int64_t m : counts)
    if (m < 1) fail(errc::range_error, "grid counts must be >= 1");

  // Per-form step when coordinate j advances by one grid unit.
  std::vector<std::vector<std::int64_t>> step(static_cast<size_t>(t));
  for (int i = 0; i < t; ++i) {
    step[static_cast<size_t>(i)].resize(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      step[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          system.form(i).coefficients[static_cast<size_t>(j)] * stride;
  }

  auto count_slice = [&](std::int64_t i0) -> std::uint64_t {
    // Values at the slice origin (first coordinate fixed to base+stride*i0).
    std::vector<std::int64_t> x(base.begin(), base.end());
    x[0] += stride * i0;
    std::vector<std::int64_t> vals(static_cast<size_t>(t));
    for (int i = 0; i < t; ++i) vals[static_cast<size_t>(i)] = system.form(i).evaluate(x);

    std::uint64_t hits = 0;
    std::vector<std::int64_t> idx(static_cast<size_t>(d), 0);
    for (;;) {
      bool ok = true;
      for (int i = 0; i < t; ++i)
        if (!sieves[static_cast<size_t>(i)].test(vals[static_cast<size_t>(i)])) {
          ok = false;
          break;
        }
      if (ok) ++hits;
      // odometer over coordinates 1..d-1
      int j = 1;
      for (; j < d; ++j) {
        ++idx[static_cast<size_t>(j)];
        for (int i = 0; i < t; ++i)
          vals[static_cast<size_t>(i)] += step[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (idx[static_cast<size_t>(j)] < counts[static_cast<size_t>(j)]) break;
        idx[static_cast<size_t>(j)] = 0;
        for (int i = 0; i < t; ++i)
          vals[static_cast<size_t>(i)] -=
              step[static_cast<size_t>(i)][static_cast<size_t>(j)] * counts[static_cast<size_t>(j)];
      }
      if (j == d) break;
    }
    return hits;
  };

  return parallel_sum<std::uint64_t>(counts[0], threads, count_slice);
}

std::uint64_t count_prime_patterns(const LinearSystem& system, const Box& box,
                                   int threads) {
  auto sieves = build_form_sieves(system, box.lo, box.side, 1, SieveMode::prime,
                                  0, threads);
  return count_patterns_on_grid(system, box.lo, box.side, 1, sieves, threads);
}

std::uint64_t count_rough_patterns(const LinearSystem& system, const Box& box,
                                   std::int64_t z, int threads) {
  auto sieves =
      build_form_sieves(system, box.lo, box.side, 1, SieveMode::rough, z, threads);
  return count_patterns_on_grid(system, box.lo, box.side, 1, sieves, threads);
}

double predicted_prime_count(const LinearSystem& system, const Box& box,
                             double x_scale, const SingularSeries& series) {
  if (x_scale < 3.0) fail(errc::range_error, "prediction scale must be >= 3");
  double logx = std::log(x_scale);
  return static_cast<double>(box.volume()) /
         std::pow(logx, system.size()) * series.value();
}

std::int64_t min_abs_form_value(const LinearSystem& system, const Box& box) {
  int d = box.dimension();
  std::int64_t best = INT64_MAX;
  // Extrema of |affine form| over a box are attained at corners.
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    std::vector<std::int64_t> corner(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      corner[static_cast<size_t>(j)] =
          box.lo[static_cast<size_t>(j)] +
          ((mask >> j) & 1 ? box.side[static_cast<size_t>(j)] - 1 : 0);
    for (const auto& f : system.forms())
      best = std::min<std::int64_t>(best, std::llabs(f.evaluate(corner)));
  }
  return best;
}

double predicted_rough_count(const LinearSystem& system, const Box& box,
                             std::int64_t z, const AdmissibleProfile& profile,
                             const BuchstabTable& table) {
  std::int64_t n_scale = *std::min_element(box.lo.begin(), box.lo.end());
  if (n_scale < 2) fail(errc::range_error, "box scale too small for u = log N / log z");
  double u = std::log(static_cast<double>(n_scale)) / std::log(static_cast<double>(z));
  if (u < 1.0 || u > table.u_max())
    fail(errc::u_out_of_table, "u = " + std::to_string(u) + " outside the table");
  HighFloat density = 1;
  for (const auto& [p, count] : profile.per_prime_counts) {
    HighFloat pd = 1;
    for (int j = 0; j < system.dimension(); ++j) pd *= p;
    density *= HighFloat(count) / pd;
  }
  double factor = std::pow(std::exp(euler_gamma()) * table.omega(u),
                           system.size());
  return static_cast<double>(box.volume()) * static_cast<double>(density) * factor;
}

std::uint64_t goldbach_pairs(std::int64_t N, std::int64_t x, std::int64_t y,
                             std::int64_t H, int threads) {
  if (N % 2 == 0) fail(errc::even_n, "N must be odd");
  if (x < 1 || y < 1 || H < 0)
    fail(errc::range_error, "need x, y >= 1 and H >= 0");
  auto s1 = SegmentedSieve::primes(x, x + H + 1, threads);
  auto s2 = SegmentedSieve::primes(y, y + H + 1, threads);
  auto s3 = SegmentedSieve::primes(N - x - y - 2 * H, N - x - y + 1, threads);
  std::uint64_t total = 0;
  for (std::int64_t p1 = x; p1 <= x + H; ++p1) {
    if (!s1.test(p1)) continue;
    for (std::int64_t p2 = y; p2 <= y + H; ++p2) {
      std::int64_t p3 = N - p1 - p2;
      // p3 must be a positive prime; the sieve alone would also accept -p3.
      if (p3 >= 2 && s2.test(p2) && s3.test(p3)) ++total;
    }
  }
  return total;
}

double goldbach_prediction(std::int64_t N, std::int64_t H, double x_scale,
                           std::int64_t z) {
  auto series = vinogradov_S(N, z);
  double logx = std::log(x_scale);
  return series.value() * static_cast<double>(H) * static_cast<double>(H) /
         (logx * logx * logx);
}

}  // namespace maierlab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maierlab/admissible.hpp"
#include "maierlab/buchstab.hpp"
#include "maierlab/linear_forms.hpp"
#include "maierlab/local_densities.hpp"
#include "maierlab/sieve.hpp"

namespace maierlab {

/// Axis-aligned lattice box: per-coordinate intervals [lo_j, lo_j + side_j).
struct Box {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> side;

  Box(std::vector<std::int64_t> lo_, std::vector<std::int64_t> side_);

  int dimension() const { return static_cast<int>(lo.size()); }
  std::int64_t volume() const;
};

struct PatternCount {
  Box box;
  std::uint64_t observed = 0;
  double predicted = 0.0;
  double ratio = 0.0;
  SieveMode kind = SieveMode::prime;
  std::int64_t z = 0;
};

/// Per-form indicator sieves over the affine image of a strided grid:
/// grid point x_j = base_j + stride * i_j, i_j in [0, counts_j).
std::vector<SegmentedSieve> build_form_sieves(
    const LinearSystem& system, std::span<const std::int64_t> base,
    std::span<const std::int64_t> counts, std::int64_t stride, SieveMode mode,
    std::int64_t z = 0, int threads = 0);

/// Lattice points on the strided grid where every form value tests positive
/// in its sieve. The inner loop is t bit lookups per point.
std::uint64_t count_patterns_on_grid(const LinearSystem& system,
                                     std::span<const std::int64_t> base,
                                     std::span<const std::int64_t> counts,
                                     std::int64_t stride,
                                     const std::vector<SegmentedSieve>& sieves,
                                     int threads = 0);

/// #{x in box : |psi_i(x)| prime for all i}.
std::uint64_t count_prime_patterns(const LinearSystem& system, const Box& box,
                                   int threads = 0);

/// #{x in box : gcd(psi_i(x), P(z)) = 1 for all i}.
std::uint64_t count_rough_patterns(const LinearSystem& system, const Box& box,
                                   std::int64_t z, int threads = 0);

/// vol(box) / (log X)^t * prod_p beta_p.
double predicted_prime_count(const LinearSystem& system, const Box& box,
                             double x_scale, const SingularSeries& series);

/// Smallest |psi_i(x)| over the box corners; the documented default X scale.
std::int64_t min_abs_form_value(const LinearSystem& system, const Box& box);

/// vol(box) * (#A / P(z)^d) * (e^gamma omega(u))^t with u = log(min_j lo_j)/log z.
double predicted_rough_count(const LinearSystem& system, const Box& box,
                             std::int64_t z, const AdmissibleProfile& profile,
                             const BuchstabTable& table);

/// #{p1 in [x, x+H], p2 in [y, y+H] : N - p1 - p2 prime}, N odd.
std::uint64_t goldbach_pairs(std::int64_t N, std::int64_t x, std::int64_t y,
                             std::int64_t H, int threads = 0);

/// S(N) * H^2 / (log X)^3 with S truncated at z.
double goldbach_prediction(std::int64_t N, std::int64_t H, double x_scale,
                           std::int64_t z);

}  // namespace maierlab

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "maierlab/buchstab.hpp"
#include "maierlab/linear_forms.hpp"
#include "maierlab/local_densities.hpp"
#include "maierlab/patterns.hpp"

namespace maierlab {

/// Configuration of one matrix experiment over the double sum
///   Sigma = sum_{a in [U,2U)^d} sum_{n in [X,2X)^d, n = a mod Q} prod 1_P(psi_i(n)),
/// Q = P(z) (or the product over prime_subset), U = round(z^u).
struct MaierConfig {
  LinearSystem system;
  std::int64_t z = 3;
  double u = 2.0;
  std::int64_t X = 0;  // Q | X required
  double lambda = 1.5;
  std::uint64_t seed = 1;

  /// 0 = exhaustive (errors out when infeasible); otherwise the number of
  /// seeded row samples.
  std::int64_t row_samples = 0;
  /// Sampled mode only: how many columns a to draw for the statistical
  /// consistency estimate (0 = skip columns).
  std::int64_t column_samples = 0;
  /// Optional sparse prime subset for Q; empty means all primes <= z.
  std::vector<std::int64_t> prime_subset;

  std::optional<std::int64_t> U_override;

  std::int64_t U() const;
  std::int64_t Q() const;
  std::vector<std::int64_t> q_primes() const;
};

struct RowRecord {
  std::vector<std::int64_t> r;
  std::int64_t volume = 0;  // clipped box volume
  std::uint64_t count = 0;
  double ratio = 0.0;  // count / (predicted_row * volume / U^d)
};

struct ColumnRecord {
  std::vector<std::int64_t> a;
  bool admissible = false;
  std::uint64_t count = 0;
};

struct MaierResult {
  bool exhaustive = false;
  BigInt sigma_rows = 0;
  BigInt sigma_columns = 0;  // exhaustive mode only; equals sigma_rows
  std::vector<ColumnRecord> columns;
  std::vector<RowRecord> rows;
  double predicted_row = 0.0;
  double mean_ratio = 0.0;
  RowRecord extremal_plus;
  RowRecord extremal_minus;
  double u_effective = 0.0;
  double series_value = 0.0;  // truncated prod beta_p used in predictions
};

/// Runs the experiment. Exhaustive mode double-counts Sigma over columns and
/// rows and verifies exact equality; sampled mode draws rows (and optionally
/// columns) with the configured seed.
MaierResult run_experiment(const MaierConfig& config, int threads = 0);

/// The column-side prediction with o(1) dropped:
/// (U^d X^d / Q^d) (log X)^{-t} (e^gamma omega(u))^t prod beta_p.
double column_estimate(const MaierConfig& config, const BuchstabTable& table,
                       const SingularSeries& series);

struct ShortBoxResult {
  Box box_plus;
  Box box_minus;
  std::uint64_t count_plus = 0;
  std::uint64_t count_minus = 0;
  double ratio_plus = 0.0;
  double ratio_minus = 0.0;
  /// Sub-box counts over the full partition of each extremal row box; their
  /// sums equal the row counts exactly.
  std::vector<std::uint64_t> partition_plus;
  std::vector<std::uint64_t> partition_minus;
};

/// Pigeonhole step: scan aligned sub-boxes of side ceil((log X)^lambda)
/// inside the extremal rows' boxes and return the densest / sparsest ones.
ShortBoxResult extremal_short_boxes(const MaierConfig& config,
                                    const MaierResult& result, double lambda,
                                    int threads = 0);

}  // namespace maierlab

#include "maierlab/maier.hpp"

#include <algorithm>
#include <cmath>

#include "maierlab/parallel.hpp"
#include "maierlab/sieve.hpp"

namespace maierlab {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

// Seeded uniform draw in [lo, hi] via rejection; independent of library
// distribution internals.
std::int64_t draw_uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

constexpr std::int64_t kExhaustiveBudget = 250'000'000;

}  // namespace

std::vector<std::int64_t> MaierConfig::q_primes() const {
  if (prime_subset.empty()) return primes_up_to(z);
  auto ps = prime_subset;
  std::sort(ps.begin(), ps.end());
  for (std::int64_t p : ps)
    if (!is_prime_u64(static_cast<std::uint64_t>(p)))
      fail(errc::config_infeasible, "prime_subset contains a composite: " +
                                        std::to_string(p));
  return ps;
}

std::int64_t MaierConfig::Q() const {
  __int128 q = 1;
  for (std::int64_t p : q_primes()) {
    q *= p;
    if (q > INT64_MAX)
      fail(errc::config_infeasible, "Q overflows 64 bits; shrink z");
  }
  return static_cast<std::int64_t>(q);
}

std::int64_t MaierConfig::U() const {
  if (U_override) return *U_override;
  double val = std::pow(static_cast<double>(z), u);
  if (val < 1.0 || val > 9e18)
    fail(errc::config_infeasible, "U = z^u outside the 64-bit range");
  return std::llround(val);
}

namespace {

struct Geometry {
  std::int64_t Q, U, X;
  std::int64_t cols_per_coord;   // U
  std::int64_t points_per_col;   // X / Q per coordinate
  std::int64_t r_lo, r_hi;       // rows with nonempty clipped boxes
};

Geometry make_geometry(const MaierConfig& cfg) {
  Geometry g{};
  g.Q = cfg.Q();
  g.U = cfg.U();
  g.X = cfg.X;
  if (g.X < 1) fail(errc::config_infeasible, "X must be positive");
  if (g.X % g.Q != 0)
    fail(errc::config_infeasible,
         "Q = " + std::to_string(g.Q) + " must divide X = " + std::to_string(g.X));
  if (static_cast<double>(g.X) < std::pow(static_cast<double>(g.Q), 3))
    fail(errc::config_infeasible, "need X >= Q^3 for the desk-scale surrogate");
  if (g.U > g.X) fail(errc::config_infeasible, "U must not exceed X");
  g.cols_per_coord = g.U;
  g.points_per_col = g.X / g.Q;
  // Clipped row boxes [Qr+U, Qr+2U) intersect [X, 2X) iff Qr > X-2U and Qr < 2X-U.
  g.r_lo = floor_div(g.X - 2 * g.U, g.Q) + 1;
  g.r_hi = ceil_div(2 * g.X - g.U, g.Q) - 1;
  return g;
}

// Odometer over a d-dimensional index cube [0, m)^d mapped to vectors.
template <typename Fn>
void for_each_vector(int d, std::int64_t m, Fn&& fn) {
  std::vector<std::int64_t> idx(static_cast<size_t>(d), 0);
  for (;;) {
    fn(idx);
    int j = 0;
    while (j < d && ++idx[static_cast<size_t>(j)] == m) idx[static_cast<size_t>(j++)] = 0;
    if (j == d) break;
  }
}

struct ClippedBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> side;
  std::int64_t volume;
};

ClippedBox clip_row_box(const Geometry& g, const std::vector<std::int64_t>& r) {
  ClippedBox b;
  b.volume = 1;
  for (std::int64_t rj : r) {
    std::int64_t lo = std::max(g.Q * rj + g.U, g.X);
    std::int64_t hi = std::min(g.Q * rj + 2 * g.U, 2 * g.X);
    b.lo.push_back(lo);
    b.side.push_back(hi - lo);
    b.volume *= hi - lo;
  }
  return b;
}

bool is_admissible(const LinearSystem& sys, const std::vector<std::int64_t>& a,
                   const std::vector<std::int64_t>& qp) {
  for (std::int64_t p : qp)
    for (const auto& f : sys.forms())
      if (f.evaluate_mod(a, p) == 0) return false;
  return true;
}

}  // namespace

double column_estimate(const MaierConfig& config, const BuchstabTable& table,
                       const SingularSeries& series) {
  Geometry g = make_geometry(config);
  int d = config.system.dimension();
  int t = config.system.size();
  double u_eff = config.u;
  if (u_eff < 1.0 || u_eff > table.u_max())
    fail(errc::u_out_of_table, "u outside the Buchstab table");
  double est = series.value();
  est *= std::pow(std::exp(euler_gamma()) * table.omega(u_eff), t);
  est *= std::pow(static_cast<double>(g.U) * static_cast<double>(g.X) /
                      static_cast<double>(g.Q),
                  d);
  est /= std::pow(std::log(static_cast<double>(g.X)), t);
  return est;
}

MaierResult run_experiment(const MaierConfig& config, int threads) {
  const LinearSystem& sys = config.system;
  int d = sys.dimension();
  int t = sys.size();
  Geometry g = make_geometry(config);
  auto qp = config.q_primes();

  MaierResult result;
  result.u_effective = std::log(static_cast<double>(g.U)) /
                       std::log(static_cast<double>(config.z));

  // Predictions. The Buchstab table and the singular-series cutoff are fixed
  // by the config so reruns are bit-identical.
  BuchstabTable table(1e-3, std::max(result.u_effective + 1.0, 4.0));
  auto bad = bad_primes(sys);
  std::int64_t zser = std::max<std::int64_t>({config.z, 500, bad.empty() ? 0 : bad.back()});
  auto series = singular_series(sys, zser, threads);
  result.series_value = series.value();
  double eg_omega = std::exp(euler_gamma()) * table.omega(result.u_effective);
  result.predicted_row = std::pow(eg_omega, t) *
                         std::pow(static_cast<double>(g.U), d) *
                         result.series_value /
                         std::pow(std::log(static_cast<double>(g.X)), t);

  // Shared per-form prime sieves over the whole [X, 2X)^d range.
  std::vector<std::int64_t> base(static_cast<size_t>(d), g.X);
  std::vector<std::int64_t> counts(static_cast<size_t>(d), g.X);
  auto sieves = build_form_sieves(sys, base, counts, 1, SieveMode::prime, 0, threads);

  double pairs = std::pow(static_cast<double>(g.U) * static_cast<double>(g.points_per_col),
                          d);
  bool exhaustive = config.row_samples == 0;
  if (exhaustive && pairs > static_cast<double>(kExhaustiveBudget))
    fail(errc::config_infeasible,
         "exhaustive double count needs " + std::to_string(pairs) +
             " lattice visits; set row_samples for the sampled mode");
  result.exhaustive = exhaustive;

  std::vector<std::vector<std::int64_t>> row_ids;
  if (exhaustive) {
    // Columns: every a in [U, 2U)^d, lattice n = a mod Q stepped by Q.
    std::vector<std::vector<std::int64_t>> col_ids;
    for_each_vector(d, g.U, [&](const std::vector<std::int64_t>& idx) {
      std::vector<std::int64_t> a(static_cast<size_t>(d));
      for (int j = 0; j < d; ++j) a[static_cast<size_t>(j)] = g.U + idx[static_cast<size_t>(j)];
      col_ids.push_back(std::move(a));
    });
    result.columns.resize(col_ids.size());
    std::vector<std::int64_t> col_counts(static_cast<size_t>(d), g.points_per_col);
    parallel_chunks(static_cast<std::int64_t>(col_ids.size()), threads,
                    [&](std::int64_t, std::int64_t b, std::int64_t e) {
                      for (std::int64_t i = b; i < e; ++i) {
                        const auto& a = col_ids[static_cast<size_t>(i)];
                        std::vector<std::int64_t> start(static_cast<size_t>(d));
                        for (int j = 0; j < d; ++j) {
                          std::int64_t rem = ((a[static_cast<size_t>(j)] - g.X) % g.Q + g.Q) % g.Q;
                          start[static_cast<size_t>(j)] = g.X + rem;
                        }
                        auto& rec = result.columns[static_cast<size_t>(i)];
                        rec.a = a;
                        rec.admissible = is_admissible(sys, a, qp);
                        rec.count = count_patterns_on_grid(sys, start, col_counts,
                                                           g.Q, sieves, 1);
                      }
                    });
    for (const auto& c : result.columns) result.sigma_columns += c.count;

    for (std::int64_t r0 = g.r_lo; r0 <= g.r_hi; ++r0) {
      // one axis explicit, remaining axes via odometer
      if (d == 1) {
        row_ids.push_back({r0});
      } else {
        std::vector<std::int64_t> span_r;
        for (std::int64_t rj = g.r_lo; rj <= g.r_hi; ++rj) span_r.push_back(rj);
        for_each_vector(d - 1, static_cast<std::int64_t>(span_r.size()),
                        [&](const std::vector<std::int64_t>& idx) {
                          std::vector<std::int64_t> r{r0};
                          for (int j = 0; j + 1 < d; ++j)
                            r.push_back(span_r[static_cast<size_t>(idx[static_cast<size_t>(j)])]);
                          row_ids.push_back(std::move(r));
                        });
      }
    }
  } else {
    // Sampled rows: interior boxes only (no clipping), one RNG stream.
    std::mt19937_64 rng(config.seed);
    std::int64_t in_lo = ceil_div(g.X - g.U, g.Q);
    std::int64_t in_hi = floor_div(2 * g.X - 2 * g.U, g.Q);
    if (in_hi < in_lo)
      fail(errc::config_infeasible, "no interior rows: U too large for X");
    for (std::int64_t s = 0; s < config.row_samples; ++s) {
      std::vector<std::int64_t> r(static_cast<size_t>(d));
      for (int j = 0; j < d; ++j) r[static_cast<size_t>(j)] = draw_uniform(rng, in_lo, in_hi);
      row_ids.push_back(std::move(r));
    }
    if (config.column_samples > 0) {
      double per_col = std::pow(static_cast<double>(g.points_per_col), d);
      if (per_col > 1e8)
        fail(errc::config_infeasible, "columns too deep to sample; reduce X/Q");
      std::vector<std::vector<std::int64_t>> col_ids;
      for (std::int64_t s = 0; s < config.column_samples; ++s) {
        std::vector<std::int64_t> a(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j)
          a[static_cast<size_t>(j)] = draw_uniform(rng, g.U, 2 * g.U - 1);
        col_ids.push_back(std::move(a));
      }
      result.columns.resize(col_ids.size());
      std::vector<std::int64_t> col_counts(static_cast<size_t>(d), g.points_per_col);
      parallel_chunks(static_cast<std::int64_t>(col_ids.size()), threads,
                      [&](std::int64_t, std::int64_t b, std::int64_t e) {
                        for (std::int64_t i = b; i < e; ++i) {
                          const auto& a = col_ids[static_cast<size_t>(i)];
                          std::vector<std::int64_t> start(static_cast<size_t>(d));
                          for (int j = 0; j < d; ++j) {
                            std::int64_t rem = ((a[static_cast<size_t>(j)] - g.X) % g.Q + g.Q) % g.Q;
                            start[static_cast<size_t>(j)] = g.X + rem;
                          }
                          auto& rec = result.columns[static_cast<size_t>(i)];
                          rec.a = a;
                          rec.admissible = is_admissible(sys, a, qp);
                          rec.count = count_patterns_on_grid(sys, start, col_counts,
                                                             g.Q, sieves, 1);
                        }
                      });
    }
  }

  result.rows.resize(row_ids.size());
  parallel_chunks(static_cast<std::int64_t>(row_ids.size()), threads,
                  [&](std::int64_t, std::int64_t b, std::int64_t e) {
                    for (std::int64_t i = b; i < e; ++i) {
                      const auto& r = row_ids[static_cast<size_t>(i)];
                      ClippedBox cb = clip_row_box(g, r);
                      auto& rec = result.rows[static_cast<size_t>(i)];
                      rec.r = r;
                      rec.volume = cb.volume;
                      rec.count = count_patterns_on_grid(sys, cb.lo, cb.side, 1,
                                                         sieves, 1);
                      double expected = result.predicted_row *
                                        static_cast<double>(cb.volume) /
                                        std::pow(static_cast<double>(g.U), d);
                      rec.ratio = static_cast<double>(rec.count) / expected;
                    }
                  });

  double ratio_sum = 0.0;
  bool have = false;
  for (const auto& row : result.rows) {
    result.sigma_rows += row.count;
    ratio_sum += row.ratio;
    if (!have || row.ratio > result.extremal_plus.ratio) result.extremal_plus = row;
    if (!have || row.ratio < result.extremal_minus.ratio) result.extremal_minus = row;
    have = true;
  }
  if (!result.rows.empty())
    result.mean_ratio = ratio_sum / static_cast<double>(result.rows.size());

  if (exhaustive && result.sigma_rows != result.sigma_columns)
    fail(errc::config_infeasible,
         "internal double-count mismatch (rows vs columns)");
  return result;
}

ShortBoxResult extremal_short_boxes(const MaierConfig& config,
                                    const MaierResult& result, double lambda,
                                    int threads) {
  Geometry g = make_geometry(config);
  const LinearSystem& sys = config.system;
  int d = sys.dimension();
  int t = sys.size();
  double H = std::pow(std::log(static_cast<double>(g.X)), lambda);
  if (H > static_cast<double>(g.U))
    fail(errc::lambda_too_large, "H = (log X)^lambda exceeds U");
  std::int64_t side = static_cast<std::int64_t>(std::ceil(H));
  double logx_t = std::pow(std::log(static_cast<double>(g.X)), t);

  auto scan_row = [&](const RowRecord& row, bool want_max)
      -> std::tuple<Box, std::uint64_t, double, std::vector<std::uint64_t>> {
    ClippedBox cb = clip_row_box(g, row.r);
    auto sieves = build_form_sieves(sys, cb.lo, cb.side, 1, SieveMode::prime, 0, threads);
    std::vector<std::int64_t> blocks(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      blocks[static_cast<size_t>(j)] =
          (cb.side[static_cast<size_t>(j)] + side - 1) / side;
    Box best({0}, {1});
    std::uint64_t best_count = 0;
    double best_ratio = want_max ? -1.0 : std::numeric_limits<double>::infinity();
    bool first = true;
    std::vector<std::uint64_t> partition;
    std::vector<std::int64_t> idx(static_cast<size_t>(d), 0);
    for (;;) {
      std::vector<std::int64_t> lo(static_cast<size_t>(d)), sd(static_cast<size_t>(d));
      std::int64_t vol = 1;
      for (int j = 0; j < d; ++j) {
        lo[static_cast<size_t>(j)] =
            cb.lo[static_cast<size_t>(j)] + idx[static_cast<size_t>(j)] * side;
        sd[static_cast<size_t>(j)] = std::min(
            side, cb.lo[static_cast<size_t>(j)] + cb.side[static_cast<size_t>(j)] -
                      lo[static_cast<size_t>(j)]);
        vol *= sd[static_cast<size_t>(j)];
      }
      std::uint64_t c = count_patterns_on_grid(sys, lo, sd, 1, sieves, 1);
      partition.push_back(c);
      double expected = static_cast<double>(vol) / logx_t * result.series_value;
      double ratio = static_cast<double>(c) / expected;
      bool better = want_max ? ratio > best_ratio : ratio < best_ratio;
      if (first || better) {
        best = Box(lo, sd);
        best_count = c;
        best_ratio = ratio;
        first = false;
      }
      int j = 0;
      while (j < d && ++idx[static_cast<size_t>(j)] == blocks[static_cast<size_t>(j)])
        idx[static_cast<size_t>(j++)] = 0;
      if (j == d) break;
    }
    return {best, best_count, best_ratio, partition};
  };

  auto [bp, cp, rp, pp] = scan_row(result.extremal_plus, true);
  auto [bm, cm, rm, pm] = scan_row(result.extremal_minus, false);
  return ShortBoxResult{std::move(bp), std::move(bm), cp, cm, rp, rm,
                        std::move(pp), std::move(pm)};
}

}  // namespace maierlab

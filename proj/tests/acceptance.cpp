// Release gate: one pass/fail line per criterion, exit 0 only if all pass.
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maierlab/admissible.hpp"
#include "maierlab/buchstab.hpp"
#include "maierlab/linear_forms.hpp"
#include "maierlab/local_densities.hpp"
#include "maierlab/maier.hpp"
#include "maierlab/patterns.hpp"
#include "maierlab/sieve.hpp"
#include "oracles.hpp"

using namespace maierlab;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << ": " << name;
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << '\n';
  if (!ok) ++failures;
}

void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
  try {
    auto [ok, detail] = fn();
    report(name, ok, detail);
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

std::vector<LinearSystem> random_suite() {
  std::mt19937_64 rng(100);
  std::vector<LinearSystem> out;
  for (int i = 0; i < 50; ++i) out.push_back(oracles::random_finite_system(rng));
  return out;
}

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string(MAIER_LAB_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

int main() {
  auto suite = random_suite();

  run("exact admissible-count identity on 50 random systems (z <= 13)", [&] {
    for (const auto& sys : suite)
      if (!admissible_count_identity_check(build_profile(sys, 13)))
        return std::pair{false, std::string("identity failed")};
    return std::pair{true, std::string("50/50 exact")};
  });

  run("beta_p dual-path equivalence for p <= 13 on the same 50 systems", [&] {
    for (const auto& sys : suite)
      for (std::int64_t p : {2, 3, 5, 7, 11, 13})
        if (nonvanishing_count_enumerate(sys, p) != nonvanishing_count_subsets(sys, p))
          return std::pair{false, "mismatch at p = " + std::to_string(p)};
    return std::pair{true, std::string("exact for all p <= 13")};
  });

  run("Buchstab oracle: closed form, omega(10), first crossing", [] {
    BuchstabTable t(1e-4, 10.5);
    double worst = 0.0;
    for (double u = 2.0; u <= 3.0; u += 1e-3)
      worst = std::max(worst, std::fabs(t.omega(u) - oracles::omega_closed(u)));
    bool a = worst <= 1e-8;
    bool b = std::fabs(t.omega(10.0) - std::exp(-euler_gamma())) <= 1e-4;
    auto cs = t.find_crossings(1.0, 3.0);
    bool c = !cs.empty() && std::fabs(cs[0].u - std::exp(euler_gamma())) <= 1e-6;
    std::ostringstream detail;
    detail << "max err [2,3] = " << worst;
    return std::pair{a && b && c, detail.str()};
  });

  run("sieve ground truth: pi(1e6) and pi(2e6) - pi(1e6)", [] {
    std::uint64_t a = prime_count(2, 1'000'001);
    std::uint64_t b = prime_count(1'000'001, 2'000'001);
    return std::pair{a == 78498 && b == 70435,
                     std::to_string(a) + ", " + std::to_string(b)};
  });

  run("rough count vs Buchstab prediction at x = 1e6, z = 100 (u = 3)", [] {
    BuchstabTable t(1e-3, 4.0);
    std::uint64_t exact = rough_count(1'000'000, 100);
    double predicted = 1e6 * t.omega(3.0) / std::log(100.0);
    double rel = std::fabs(static_cast<double>(exact) / predicted - 1.0);
    std::ostringstream detail;
    detail << exact << " vs " << predicted << ", rel = " << rel;
    return std::pair{rel <= 0.05, detail.str()};
  });

  run("pattern counts equal trial division on 100 random boxes", [] {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> lo(-300, 300), side(1, 100);
    for (int trial = 0; trial < 100; ++trial) {
      auto sys = (trial % 2 == 0) ? k_term_ap(3) : k_term_ap(4);
      std::vector<std::int64_t> blo{lo(rng), lo(rng)}, bs{side(rng), side(rng)};
      while (bs[0] * bs[1] > 10'000) bs[rng() % 2] = std::max<std::int64_t>(1, bs[rng() % 2] / 2);
      Box box(blo, bs);
      if (count_prime_patterns(sys, box) !=
          oracles::pattern_count_td(sys, blo, bs, false, 0))
        return std::pair{false, std::string("prime mismatch")};
      if (count_rough_patterns(sys, box, 7) !=
          oracles::pattern_count_td(sys, blo, bs, true, 7))
        return std::pair{false, std::string("rough mismatch")};
    }
    return std::pair{true, std::string("200 exact comparisons")};
  });

  run("Green-Tao desk-scale ratio for 3-AP over [1e3, 2e3)^2", [] {
    auto sys = k_term_ap(3);
    Box box({1000, 1000}, {1000, 1000});
    auto series = singular_series(sys, 1000);
    std::uint64_t obs = count_prime_patterns(sys, box);
    double pred = predicted_prime_count(sys, box, 2000.0, series);
    double ratio = static_cast<double>(obs) / pred;
    std::ostringstream detail;
    detail << obs << " observed, ratio = " << ratio
           << " (asymptotic sanity band, not a theorem check)";
    return std::pair{ratio >= 0.7 && ratio <= 1.3, detail.str()};
  });

  run("Maier double-count identity and short-box partition additivity", [] {
    MaierConfig cfg{LinearSystem({LinearForm({1}, 0)})};
    cfg.z = 3;
    cfg.U_override = 9;
    cfg.X = 60'000;
    cfg.lambda = 0.5;
    auto result = run_experiment(cfg);
    bool identity = result.exhaustive && result.sigma_rows == result.sigma_columns;
    auto sb = extremal_short_boxes(cfg, result, cfg.lambda);
    std::uint64_t ps = std::accumulate(sb.partition_plus.begin(),
                                       sb.partition_plus.end(), std::uint64_t{0});
    std::uint64_t ms = std::accumulate(sb.partition_minus.begin(),
                                       sb.partition_minus.end(), std::uint64_t{0});
    bool additive = ps == result.extremal_plus.count && ms == result.extremal_minus.count;
    return std::pair{identity && additive,
                     "sigma = " + result.sigma_rows.str() + " both ways"};
  });

  run("Maier phenomenon snapshot: 3-AP, z = 5, X ~ 1e7, shipped seed", [] {
    MaierConfig cfg{k_term_ap(3)};
    cfg.z = 5;
    cfg.u = 3.0;
    cfg.X = 9'999'990;
    cfg.lambda = 1.5;
    cfg.seed = 20260823;
    cfg.row_samples = 1000;
    auto result = run_experiment(cfg);
    double mx = result.extremal_plus.ratio, mn = result.extremal_minus.ratio;
    std::ostringstream detail;
    detail << "row ratios in [" << mn << ", " << mx
           << "] (regression snapshot, not a mathematical claim)";
    return std::pair{mx > 1.05 && mn < 0.95, detail.str()};
  });

  run("Goldbach pairs: exhaustive N = 21 and prediction band near 1e5", [] {
    bool exact = goldbach_pairs(21, 1, 1, 20) == oracles::goldbach_triple_loop(21);
    bool band = true;
    std::ostringstream detail;
    detail << "N=21 exact; ratios:";
    for (std::int64_t N : {100'003, 100'019, 100'043}) {
      std::int64_t x = N / 6, H = 5000;
      std::uint64_t obs = goldbach_pairs(N, x, x, H);
      double pred = goldbach_prediction(N, H, static_cast<double>(x), 10'000);
      double ratio = static_cast<double>(obs) / pred;
      detail << ' ' << ratio;
      band = band && ratio >= 0.6 && ratio <= 1.4;
    }
    return std::pair{exact && band, detail.str()};
  });

  run("CLI determinism: byte-identical JSON for --threads 1 vs 4", [] {
    std::string cfg = "{\"system\": [[1,0,0],[1,1,0],[1,2,0]], \"z\": 5, \"u\": 3.0, "
                      "\"X\": 9999990, \"lambda\": 1.5, \"seed\": 20260823, "
                      "\"row_samples\": 200}";
    std::ofstream("acceptance_cfg.json") << cfg;
    auto [c1, o1] = run_cli("experiment --config acceptance_cfg.json "
                            "--out acceptance_run --threads 1");
    auto [c4, o4] = run_cli("experiment --config acceptance_cfg.json "
                            "--out acceptance_run --threads 4");
    auto [s1, p1] = run_cli("sieve --lo -1000000 --hi 1000000 --threads 1");
    auto [s4, p4] = run_cli("sieve --lo -1000000 --hi 1000000 --threads 4");
    bool ok = c1 == 0 && c4 == 0 && o1 == o4 && !o1.empty() &&
              s1 == 0 && s4 == 0 && p1 == p4 && !p1.empty();
    return std::pair{ok, std::string(ok ? "experiment + sieve byte-identical" : "mismatch")};
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << '\n';
  return failures == 0 ? 0 : 1;
}

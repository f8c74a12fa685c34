// maier-lab: one binary exposing the library as subcommands with JSON/CSV
// output. Primary JSON goes to stdout and is byte-stable for a fixed
// (argv, seed, config); timing goes to stderr.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "maierlab/admissible.hpp"
#include "maierlab/buchstab.hpp"
#include "maierlab/linear_forms.hpp"
#include "maierlab/local_densities.hpp"
#include "maierlab/maier.hpp"
#include "maierlab/patterns.hpp"
#include "maierlab/sieve.hpp"

using json = nlohmann::ordered_json;
using namespace maierlab;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json manifest_json(const std::vector<std::string>& argv_copy,
                   const std::string& config_blob, std::uint64_t seed,
                   const std::vector<std::string>& outputs) {
  std::string cmd;
  for (std::size_t i = 0; i < argv_copy.size(); ++i) {
    // --threads never changes results, so keep it out of the replay line.
    if (argv_copy[i] == "--threads") {
      ++i;
      continue;
    }
    if (argv_copy[i].rfind("--threads=", 0) == 0) continue;
    if (!cmd.empty()) cmd += ' ';
    cmd += argv_copy[i];
  }
  json m;
  m["command"] = cmd;
  m["config_digest"] = hex64(fnv1a(cmd + "\x1f" + config_blob));
  m["seed"] = seed;
  m["version"] = kVersion;
  m["outputs"] = outputs;
  return m;
}

json box_json(const Box& b) {
  json out;
  out["lo"] = b.lo;
  out["side"] = b.side;
  out["volume"] = b.volume();
  return out;
}

Box parse_box(const std::string& text) {
  // "x1:H1,x2:H2,..."
  std::vector<std::int64_t> lo, side;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos)
      fail(errc::parse_error, "box coordinate must look like lo:H");
    lo.push_back(std::stoll(part.substr(0, colon)));
    side.push_back(std::stoll(part.substr(colon + 1)));
  }
  return Box(std::move(lo), std::move(side));
}

std::string system_digest_blob(const LinearSystem& sys) { return sys.to_text(); }

int run(int argc, char** argv) {
  std::vector<std::string> argv_copy(argv, argv + argc);

  CLI::App app{"maier-lab: prime patterns of linear systems at desk scale"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker pool size (0 = hardware)");

  std::string system_file, format = "json", box_text, kind = "prime", emit = "count";
  std::string mode = "prime", config_file, out_prefix = "experiment";
  std::int64_t zmax = 100, zopt = 0, lo = 0, hi = 0, sample_n = 0;
  std::uint64_t seed = 1;
  double umax = 5.0, step = 1e-3, xscale = 0.0;
  bool crossings = false, predict = false;

  auto* analyze = app.add_subcommand("analyze", "dimension, size, complexity");
  analyze->add_option("--system", system_file, "system file")->required();

  auto* densities = app.add_subcommand("densities", "local densities beta_p");
  densities->add_option("--system", system_file)->required();
  densities->add_option("--zmax", zmax, "prime cutoff")->required();
  densities->add_option("--format", format, "json|csv");

  auto* buchstab = app.add_subcommand("buchstab", "Buchstab omega(u) table");
  buchstab->add_option("--umax", umax)->required();
  buchstab->add_option("--step", step);
  buchstab->add_flag("--crossings", crossings, "emit crossings of exp(gamma)omega=1");
  buchstab->add_option("--format", format, "json|csv");

  auto* sieve_cmd = app.add_subcommand("sieve", "segmented prime/rough sieve");
  sieve_cmd->add_option("--lo", lo)->required();
  sieve_cmd->add_option("--hi", hi)->required();
  sieve_cmd->add_option("--mode", mode, "prime|rough");
  sieve_cmd->add_option("--z", zopt, "roughness cutoff");
  sieve_cmd->add_option("--emit", emit, "bits|count");

  auto* admissible_cmd = app.add_subcommand("admissible", "admissible residues mod P(z)");
  admissible_cmd->add_option("--system", system_file)->required();
  admissible_cmd->add_option("--z", zopt)->required();
  admissible_cmd->add_option("--sample", sample_n, "number of tuples to draw");
  admissible_cmd->add_option("--seed", seed);

  auto* count_cmd = app.add_subcommand("count", "pattern counts over a box");
  count_cmd->add_option("--system", system_file)->required();
  count_cmd->add_option("--box", box_text, "x1:H1,...,xd:Hd")->required();
  count_cmd->add_option("--kind", kind, "prime|rough");
  count_cmd->add_option("--z", zopt, "roughness cutoff / series cutoff");
  count_cmd->add_flag("--predict", predict);
  count_cmd->add_option("--xscale", xscale, "log scale X for predictions");

  auto* experiment = app.add_subcommand("experiment", "Maier matrix experiment");
  experiment->add_option("--config", config_file, "JSON config")->required();
  experiment->add_option("--out", out_prefix, "output prefix for CSV sidecar");

  app.parse(argc, argv);
  auto t0 = std::chrono::steady_clock::now();

  json out;

  if (*analyze) {
    auto sys = LinearSystem::load(system_file);
    out["d"] = sys.dimension();
    out["t"] = sys.size();
    bool finite = is_finite_complexity(sys);
    out["finite"] = finite;
    if (finite)
      out["complexity"] = complexity(sys).value;
    else
      out["complexity"] = nullptr;
    out["manifest"] = manifest_json(argv_copy, system_digest_blob(sys), 0, {});
    std::cout << out.dump(2) << '\n';
  } else if (*densities) {
    auto sys = LinearSystem::load(system_file);
    bool finite = is_finite_complexity(sys);
    json rows = json::array();
    for (std::int64_t p : primes_up_to(zmax)) {
      auto b = beta_p(sys, p);
      json row;
      row["p"] = p;
      row["numerator"] = numerator(b.value).str();
      row["denominator"] = denominator(b.value).str();
      row["beta"] = static_cast<double>(b.value);
      rows.push_back(std::move(row));
    }
    if (format == "csv") {
      std::cout << "p,numerator,denominator,beta\n";
      for (const auto& r : rows)
        std::cout << r["p"].get<std::int64_t>() << ','
                  << r["numerator"].get<std::string>() << ','
                  << r["denominator"].get<std::string>() << ','
                  << r["beta"].get<double>() << '\n';
      if (finite) {
        auto s = singular_series(sys, zmax, threads);
        std::cout << "product," << s.value() << ",tail_bound," << s.tail_bound << '\n';
      }
    } else {
      out["finite_complexity"] = finite;
      out["densities"] = rows;
      if (finite) {
        auto s = singular_series(sys, zmax, threads);
        out["product"] = s.value();
        out["cutoff"] = s.cutoff;
        out["tail_bound"] = s.tail_bound;
        out["interval"] = {s.value() / (1.0 + s.tail_bound),
                           s.value() * (1.0 + s.tail_bound)};
      }
      out["manifest"] = manifest_json(argv_copy, system_digest_blob(sys), 0, {});
      std::cout << out.dump(2) << '\n';
    }
  } else if (*buchstab) {
    BuchstabTable table(step, umax);
    double eg = std::exp(euler_gamma());
    if (format == "csv") {
      std::cout.precision(15);
      if (crossings) {
        std::cout << "u,sign_right\n";
        for (const auto& c : table.find_crossings(1.0, table.u_max()))
          std::cout << c.u << ',' << c.sign_right << '\n';
      } else {
        std::cout << "u,omega,egamma_omega_minus_1\n";
        for (std::size_t k = 0; k < table.values().size(); ++k) {
          double u = table.grid_u(k);
          double w = table.values()[k];
          std::cout << u << ',' << w << ',' << eg * w - 1.0 << '\n';
        }
      }
    } else {
      out["step"] = table.step();
      out["u_max"] = table.u_max();
      if (crossings) {
        json cs = json::array();
        for (const auto& c : table.find_crossings(1.0, table.u_max()))
          cs.push_back({{"u", c.u}, {"sign_right", c.sign_right}});
        out["crossings"] = cs;
      } else {
        json rows = json::array();
        for (std::size_t k = 0; k < table.values().size(); ++k)
          rows.push_back({{"u", table.grid_u(k)}, {"omega", table.values()[k]}});
        out["table"] = rows;
      }
      out["manifest"] = manifest_json(argv_copy, "", 0, {});
      std::cout << out.dump(2) << '\n';
    }
  } else if (*sieve_cmd) {
    SieveMode m = mode == "rough" ? SieveMode::rough : SieveMode::prime;
    if (mode != "rough" && mode != "prime")
      fail(errc::parse_error, "mode must be prime or rough");
    auto s = sieve_range(lo, hi, m, zopt, threads);
    out["lo"] = lo;
    out["hi"] = hi;
    out["mode"] = mode;
    if (m == SieveMode::rough) out["z"] = zopt;
    out["count"] = s.count();
    if (emit == "bits") {
      json members = json::array();
      for (std::int64_t n = lo; n < hi; ++n)
        if (s.test(n)) members.push_back(n);
      out["members"] = members;
    } else if (emit != "count") {
      fail(errc::parse_error, "emit must be bits or count");
    }
    out["manifest"] = manifest_json(argv_copy, "", 0, {});
    std::cout << out.dump(2) << '\n';
  } else if (*admissible_cmd) {
    auto sys = LinearSystem::load(system_file);
    auto profile = build_profile(sys, zopt);
    out["z"] = zopt;
    json rows = json::array();
    for (const auto& [p, c] : profile.per_prime_counts)
      rows.push_back({{"p", p}, {"count", c.str()}});
    out["per_prime_counts"] = rows;
    out["total"] = profile.total().str();
    out["degenerate"] = profile.degenerate;
    if (sample_n > 0) {
      std::mt19937_64 rng(seed);
      json samples = json::array();
      for (std::int64_t i = 0; i < sample_n; ++i) {
        auto tup = sample_admissible(profile, rng);
        json s;
        s["primes"] = tup.primes;
        s["residues"] = tup.residues;
        if (zopt <= 43) {  // primorial still fits in 64 bits
          std::int64_t q = 0;
          s["crt"] = tup.crt(&q);
          s["modulus"] = q;
        }
        samples.push_back(std::move(s));
      }
      out["samples"] = samples;
    }
    out["manifest"] = manifest_json(argv_copy, system_digest_blob(sys), seed, {});
    std::cout << out.dump(2) << '\n';
  } else if (*count_cmd) {
    auto sys = LinearSystem::load(system_file);
    Box box = parse_box(box_text);
    out["box"] = box_json(box);
    out["kind"] = kind;
    std::uint64_t observed;
    if (kind == "prime") {
      observed = count_prime_patterns(sys, box, threads);
    } else if (kind == "rough") {
      if (zopt < 2) fail(errc::parse_error, "rough counting needs --z");
      observed = count_rough_patterns(sys, box, zopt, threads);
      out["z"] = zopt;
    } else {
      fail(errc::parse_error, "kind must be prime or rough");
    }
    out["observed"] = observed;
    if (predict) {
      if (kind == "prime") {
        double xs = xscale > 0 ? xscale
                               : static_cast<double>(min_abs_form_value(sys, box));
        std::int64_t zser = zopt >= 2 ? zopt : 1000;
        auto series = singular_series(sys, zser, threads);
        double pred = predicted_prime_count(sys, box, xs, series);
        out["x_scale"] = xs;
        out["predicted"] = pred;
        out["ratio"] = static_cast<double>(observed) / pred;
      } else {
        auto profile = build_profile(sys, zopt);
        double n_scale = static_cast<double>(
            *std::min_element(box.lo.begin(), box.lo.end()));
        double u = std::log(n_scale) / std::log(static_cast<double>(zopt));
        BuchstabTable table(1e-3, std::max(u + 1.0, 4.0));
        double pred = predicted_rough_count(sys, box, zopt, profile, table);
        out["u"] = u;
        out["predicted"] = pred;
        out["ratio"] = static_cast<double>(observed) / pred;
      }
    }
    out["manifest"] = manifest_json(argv_copy, system_digest_blob(sys), 0, {});
    std::cout << out.dump(2) << '\n';
  } else if (*experiment) {
    std::ifstream in(config_file);
    if (!in) fail(errc::parse_error, "cannot open config: " + config_file);
    json cfg_json = json::parse(in);

    MaierConfig cfg{[&] {
      if (cfg_json.contains("system_file"))
        return LinearSystem::load(cfg_json["system_file"].get<std::string>());
      return LinearSystem::parse_json(cfg_json.at("system").dump());
    }()};
    cfg.z = cfg_json.at("z").get<std::int64_t>();
    cfg.u = cfg_json.value("u", 2.0);
    cfg.X = cfg_json.at("X").get<std::int64_t>();
    cfg.lambda = cfg_json.value("lambda", 1.5);
    cfg.seed = cfg_json.value("seed", std::uint64_t{1});
    cfg.row_samples = cfg_json.value("row_samples", std::int64_t{0});
    cfg.column_samples = cfg_json.value("column_samples", std::int64_t{0});
    if (cfg_json.contains("U"))
      cfg.U_override = cfg_json["U"].get<std::int64_t>();
    if (cfg_json.contains("prime_subset"))
      cfg.prime_subset = cfg_json["prime_subset"].get<std::vector<std::int64_t>>();

    auto result = run_experiment(cfg, threads);

    std::string rows_csv = out_prefix + ".rows.csv";
    {
      std::ofstream csv(rows_csv);
      csv << "row,volume,count,ratio\n";
      csv.precision(12);
      for (const auto& row : result.rows) {
        csv << '"';
        for (size_t j = 0; j < row.r.size(); ++j)
          csv << (j ? " " : "") << row.r[j];
        csv << "\"," << row.volume << ',' << row.count << ',' << row.ratio << '\n';
      }
    }

    out["exhaustive"] = result.exhaustive;
    out["sigma_rows"] = result.sigma_rows.str();
    if (result.exhaustive) out["sigma_columns"] = result.sigma_columns.str();
    out["rows_counted"] = result.rows.size();
    out["predicted_row"] = result.predicted_row;
    out["mean_ratio"] = result.mean_ratio;
    out["u_effective"] = result.u_effective;
    out["series_value"] = result.series_value;
    out["U"] = cfg.U();
    out["Q"] = cfg.Q();
    auto row_json = [](const RowRecord& r) {
      return json{{"r", r.r}, {"volume", r.volume}, {"count", r.count}, {"ratio", r.ratio}};
    };
    out["extremal"] = {{"plus", row_json(result.extremal_plus)},
                       {"minus", row_json(result.extremal_minus)}};
    double max_ratio = result.extremal_plus.ratio;
    double min_ratio = result.extremal_minus.ratio;
    out["row_ratio_max"] = max_ratio;
    out["row_ratio_min"] = min_ratio;
    if (!result.columns.empty()) {
      std::uint64_t admissible_cols = 0;
      for (const auto& c : result.columns)
        if (c.admissible) ++admissible_cols;
      out["columns_counted"] = result.columns.size();
      out["admissible_columns"] = admissible_cols;
    }
    try {
      auto sb = extremal_short_boxes(cfg, result, cfg.lambda, threads);
      out["short_boxes"] = {
          {"plus", {{"box", box_json(sb.box_plus)}, {"count", sb.count_plus}, {"ratio", sb.ratio_plus}}},
          {"minus", {{"box", box_json(sb.box_minus)}, {"count", sb.count_minus}, {"ratio", sb.ratio_minus}}},
      };
    } catch (const Error& e) {
      if (e.code() != errc::lambda_too_large) throw;
      out["short_boxes"] = nullptr;
      out["short_boxes_note"] = "H = (log X)^lambda exceeds U for this config";
    }
    out["manifest"] =
        manifest_json(argv_copy, cfg_json.dump(), cfg.seed, {rows_csv});
    std::cout << out.dump(2) << '\n';
  }

  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
  std::cerr << "wall_time_s " << dt.count() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::cout << e.what() << '\n';
      return 0;
    }
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    json err;
    err["error"] = e.code_name();
    err["message"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = "INTERNAL";
    err["message"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  }
}

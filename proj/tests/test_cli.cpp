#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "schema_check.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args, bool capture_stderr = false) {
  std::string cmd = std::string(MAIER_LAB_BIN) + " " + args;
  cmd += capture_stderr ? " 2>&1 1>/dev/null" : " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string schema_dir() { return MAIERLAB_SCHEMA_DIR; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

bool validates(const std::string& schema, const std::string& text) {
  std::string why;
  bool ok = schema_check::validate_file(schema_dir(), schema,
                                        nlohmann::json::parse(text), why);
  if (!ok) MESSAGE("schema " << schema << ": " << why);
  return ok;
}

}  // namespace

TEST_CASE("analyze: 4-AP system") {
  write_file("cli_4ap.txt", "0 + 1*x1 + 0*x2\n0 + 1*x1 + 1*x2\n"
                            "0 + 1*x1 + 2*x2\n0 + 1*x1 + 3*x2\n");
  auto r = run("analyze --system cli_4ap.txt");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["d"] == 2);
  CHECK(j["t"] == 4);
  CHECK(j["finite"] == true);
  CHECK(j["complexity"] == 2);
  CHECK(validates("analyze.schema.json", r.output));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("analyze --no-such-flag").exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("densities: infinite-complexity system still yields finite beta_p") {
  write_file("cli_twin.txt", "0 + 1*x1\n2 + 1*x1\n");
  auto r = run("densities --system cli_twin.txt --zmax 10");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["finite_complexity"] == false);
  CHECK_FALSE(j.contains("product"));
  CHECK(validates("densities.schema.json", r.output));
}

TEST_CASE("densities: finite system emits product and interval") {
  write_file("cli_3ap.txt", "0 + 1*x1 + 0*x2\n0 + 1*x1 + 1*x2\n0 + 1*x1 + 2*x2\n");
  auto r = run("densities --system cli_3ap.txt --zmax 100");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["product"].get<double>() > 1.0);
  CHECK(validates("densities.schema.json", r.output));
}

TEST_CASE("buchstab table and crossings validate") {
  auto r = run("buchstab --umax 3 --step 0.001");
  REQUIRE(r.exit_code == 0);
  CHECK(validates("buchstab.schema.json", r.output));
  auto c = run("buchstab --umax 4 --crossings");
  REQUIRE(c.exit_code == 0);
  CHECK(validates("buchstab.schema.json", c.output));
  auto csv = run("buchstab --umax 3 --format csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.output.rfind("u,omega", 0) == 0);
}

TEST_CASE("sieve: counts, bits, and domain errors") {
  auto r = run("sieve --lo 10 --hi 20 --emit bits");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["count"] == 4);
  CHECK(j["members"] == nlohmann::json::parse("[11,13,17,19]"));
  CHECK(validates("sieve.schema.json", r.output));

  auto bad = run("sieve --lo 20 --hi 10", true);
  CHECK(bad.exit_code == 1);
  auto err = nlohmann::json::parse(bad.output);
  CHECK(err["error"] == "RANGE_ERROR");
  CHECK(validates("error.schema.json", bad.output));
}

TEST_CASE("admissible with samples validates") {
  auto r = run("admissible --system cli_3ap.txt --z 7 --sample 3 --seed 5");
  REQUIRE(r.exit_code == 0);
  CHECK(validates("admissible.schema.json", r.output));
}

TEST_CASE("count with prediction validates") {
  auto r = run("count --system cli_3ap.txt --box 100:50,100:50 --kind prime "
               "--predict --xscale 300 --z 100");
  REQUIRE(r.exit_code == 0);
  CHECK(validates("count.schema.json", r.output));
  auto rough = run("count --system cli_3ap.txt --box 100:50,100:50 --kind rough --z 7");
  REQUIRE(rough.exit_code == 0);
  CHECK(validates("count.schema.json", rough.output));
}

TEST_CASE("experiment: validates and is thread-count independent") {
  std::string cfg = R"({
    "system": [[1, 0]],
    "z": 3, "u": 2.0, "U": 9, "X": 60000,
    "lambda": 0.5, "seed": 11
  })";
  write_file("cli_toy.json", cfg);
  CHECK(validates("experiment_config.schema.json", cfg));

  auto r1 = run("experiment --config cli_toy.json --out cli_toy --threads 1");
  auto r4 = run("experiment --config cli_toy.json --out cli_toy --threads 4");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r4.exit_code == 0);
  CHECK(r1.output == r4.output);
  CHECK(validates("experiment.schema.json", r1.output));
  auto j = nlohmann::json::parse(r1.output);
  CHECK(j["sigma_rows"] == j["sigma_columns"]);
  std::ifstream csv("cli_toy.rows.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "row,volume,count,ratio");
}

TEST_CASE("deterministic reruns: identical argv gives identical bytes") {
  auto a = run("densities --system cli_3ap.txt --zmax 50");
  auto b = run("densities --system cli_3ap.txt --zmax 50");
  CHECK(a.output == b.output);
}

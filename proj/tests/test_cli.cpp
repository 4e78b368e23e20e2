#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gskor/cli.hpp"
#include "gskor/config.hpp"
#include "gskor/io.hpp"
#include "gskor/rng.hpp"

using namespace gskor;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "gskor_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const RunConfig config = parse_config("{}");
  CHECK(config.grid.steps == 4096);
  CHECK(config.grid.horizon == 1.0);
  CHECK(config.tolerances.picard == 1e-10);
  CHECK(config.tolerances.max_iterations == 50);
  CHECK(config.sigma2_min == 0.25);
  CHECK(config.sigma2_max == 1.0);
  CHECK(config.paths == 1000);
  CHECK(config.seed == 1);
}

TEST_CASE("config validation aggregates issues with JSON pointers") {
  try {
    parse_config(R"({"sigma2_min": 2.0, "sigma2_max": 1.0, "grid": {"T": -1, "n": 0}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string all;
    for (const auto& issue : e.issues()) all += issue + "\n";
    CHECK(all.find("/sigma2_min") != std::string::npos);
    CHECK(all.find("/grid/T") != std::string::npos);
    CHECK(all.find("/grid/n") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    parse_config(R"({"grid": {"T": 1.0, "n": 16, "bogus": 3}, "mystery": 1})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string all;
    for (const auto& issue : e.issues()) all += issue + "\n";
    CHECK(all.find("/grid/bogus") != std::string::npos);
    CHECK(all.find("/mystery") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
}

TEST_CASE("constraint specs parse and build") {
  const ConstraintSpec band = parse_constraint_spec(R"({"kind":"band","alpha":-1.0,"beta":1.0})");
  const TimeGrid grid(1.0, 32);
  const ConstraintPair pair = build_constraints(band, grid, ".");
  CHECK(pair.separation_gap() == 2.0);

  const ConstraintSpec rho = parse_constraint_spec(R"({"kind":"rho","alpha":1.0,"beta":2.0})");
  CHECK(build_constraints(rho, grid, ".").upper_obstacle()[0] == 4.0);

  const ConstraintSpec cubic = parse_constraint_spec(
      R"({"kind":"custom","alpha":-1.0,"beta":1.0,"lower_id":"cubic","upper_id":"cubic"})");
  CHECK(build_constraints(cubic, grid, ".").separation_gap() > 1.0);

  CHECK_THROWS_AS(parse_constraint_spec(R"({"kind":"oval"})"), ConfigError);
  CHECK_THROWS_AS(parse_constraint_spec(R"({"kind":"custom"})"), ConfigError);
  CHECK_THROWS_AS(parse_constraint_spec(R"({"kind":"band","alpha":true})"), ConfigError);
}

TEST_CASE("coefficient builders cover the builtin ids") {
  RunConfig config = parse_config(
      R"({"coefficients": {"f": {"id": "affine", "a": -1.0, "b": 0.5},
                           "h": {"id": "constant", "c": 0.25},
                           "g": {"id": "constant", "c": 1.0}}})");
  const SdeCoefficients coeffs = build_coefficients(config);
  CHECK(coeffs.drift(0.0, 2.0) == -1.5);
  CHECK(coeffs.qv_drift(0.3, 9.0) == 0.25);
  CHECK(coeffs.diffusion(0.3, 9.0) == 1.0);
  CHECK(coeffs.lipschitz == 1.0);

  CHECK_THROWS_AS(parse_config(R"({"coefficients": {"f": {"id": "cubic"}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"coefficients": {"f": {"id": "affine", "q": 1}}})"),
                  ConfigError);
}

TEST_CASE("path CSV round trip preserves every byte of the values") {
  const auto dir = temp_dir();
  rng::SplitMix gen(2025);
  const TimeGrid grid(2.0, 257);
  std::vector<double> v(grid.nodes());
  for (double& x : v) x = gen.normal() * 1e3;
  const SampledPath path(grid, std::move(v));
  io::write_path_csv(dir / "roundtrip.csv", path);
  const SampledPath back = io::read_path_csv(dir / "roundtrip.csv");
  REQUIRE(back.size() == path.size());
  CHECK(back.grid() == path.grid());
  for (std::size_t i = 0; i < path.size(); ++i) CHECK(back[i] == path[i]);
}

TEST_CASE("path CSV rejects malformed input") {
  const auto dir = temp_dir();
  write_text(dir / "bad_header.csv", "time,v\n0,0\n1,1\n");
  CHECK_THROWS(io::read_path_csv(dir / "bad_header.csv"));
  write_text(dir / "nonuniform.csv", "t,value\n0,0\n0.7,1\n1,2\n");
  CHECK_THROWS(io::read_path_csv(dir / "nonuniform.csv"));
  write_text(dir / "badnum.csv", "t,value\n0,zero\n1,1\n");
  CHECK_THROWS(io::read_path_csv(dir / "badnum.csv"));
}

TEST_CASE("skorokhod subcommand reproduces the ramp closed form") {
  const auto dir = temp_dir();
  const TimeGrid grid(1.0, 64);
  io::write_path_csv(dir / "ramp.csv",
                     SampledPath::sample(grid, [](double t) { return 2.0 * t; }));
  write_text(dir / "band.json", R"({"kind":"band","alpha":-1.0,"beta":1.0})");
  const int rc = cli::run_skorokhod((dir / "ramp.csv").string(), (dir / "band.json").string(),
                                    (dir / "sol.csv").string());
  CHECK(rc == 0);

  std::ifstream in(dir / "sol.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,s,x,k,k_r,k_l");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double t, s, x, k, kr, kl;
    fields >> t >> s >> x >> k >> kr >> kl;
    CHECK(std::abs(x - std::min(2.0 * t, 1.0)) <= 1e-9);
    CHECK(std::abs(k - (x - s)) <= 1e-12);
    CHECK(kr == 0.0);
    ++rows;
  }
  CHECK(rows == grid.nodes());
}

TEST_CASE("verify subcommand is byte-deterministic") {
  const auto dir = temp_dir();
  const int rc1 = cli::run_verify("stability", 40, 7, (dir / "r1.json").string());
  const int rc2 = cli::run_verify("stability", 40, 7, (dir / "r2.json").string());
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  const std::string a = read_text(dir / "r1.json");
  CHECK(!a.empty());
  CHECK(a == read_text(dir / "r2.json"));
  CHECK_THROWS_AS(cli::run_verify("nope", 1, 1, ""), std::invalid_argument);
}

TEST_CASE("expect subcommand emits upper and lower estimates") {
  const auto dir = temp_dir();
  write_text(dir / "cfg.json",
             R"({"grid": {"T": 1.0, "n": 64}, "paths": 2000, "seed": 3,
                 "sigma2_min": 0.25, "sigma2_max": 1.0,
                 "family": {"kind": "constant", "m": 3}})");
  const int rc = cli::run_expect("terminal_square", (dir / "cfg.json").string(),
                                 (dir / "expect.json").string());
  CHECK(rc == 0);
  const auto report = nlohmann::json::parse(read_text(dir / "expect.json"));
  CHECK(std::abs(report["upper"]["value"].get<double>() - 1.0) <= 0.1);
  CHECK(std::abs(report["lower"]["value"].get<double>() - 0.25) <= 0.05);
  CHECK(report["upper"]["argmax_scenario"].get<int>() == 2);
  CHECK_THROWS_AS(
      cli::run_expect("nope", (dir / "cfg.json").string(), (dir / "x.json").string()),
      std::invalid_argument);
}

TEST_CASE("simulate subcommand writes per-path CSVs and a summary") {
  const auto dir = temp_dir() / "runs";
  std::filesystem::remove_all(dir);
  const auto cfg = temp_dir() / "sim.json";
  write_text(cfg,
             R"({"grid": {"T": 1.0, "n": 128}, "paths": 2, "seed": 5,
                 "constraints": {"kind": "band", "alpha": -1.0, "beta": 1.0},
                 "coefficients": {"f": {"id": "affine", "a": -1.0, "b": 0.0},
                                  "g": {"id": "constant", "c": 1.0}},
                 "family": {"kind": "constant", "m": 2}})");
  const int rc = cli::run_simulate(cfg.string(), dir.string());
  CHECK(rc == 0);
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "path_s00_p00000.csv"));
  CHECK(std::filesystem::exists(dir / "path_s01_p00001.csv"));
  const std::string head = read_text(dir / "path_s00_p00000.csv").substr(0, 18);
  CHECK(head == "t,B,QV,X,A,A_r,A_l");
}

TEST_CASE("installed binary runs end to end") {
  const char* binary = std::getenv("GSKOR_CLI");
  if (binary == nullptr) return;  // only wired up under ctest
  const auto dir = temp_dir();
  const std::string out1 = (dir / "v1.json").string();
  const std::string out2 = (dir / "v2.json").string();
  const std::string base = std::string(binary) + " verify --suite comparison --trials 4 --seed 9";
  CHECK(std::system((base + " --out " + out1).c_str()) == 0);
  // Capping the worker pool must not change a single byte of the report.
  CHECK(std::system(("GSKOR_THREADS=1 " + base + " --out " + out2).c_str()) == 0);
  CHECK(read_text(out1) == read_text(out2));
}

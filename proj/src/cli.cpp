#include "gskor/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gskor/config.hpp"
#include "gskor/io.hpp"
#include "gskor/verify.hpp"

namespace gskor::cli {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_report(const std::string& out_file, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  const std::filesystem::path path(out_file);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_file);
  out << text;
}

PathFunctional named_functional(const std::string& id) {
  if (id == "terminal") return [](const GBMPath& p) { return p.b.back(); };
  if (id == "terminal_square") return [](const GBMPath& p) { return p.b.back() * p.b.back(); };
  if (id == "terminal_positive")
    return [](const GBMPath& p) { return std::max(p.b.back(), 0.0); };
  if (id == "running_max") {
    return [](const GBMPath& p) {
      double m = p.b[0];
      for (std::size_t i = 0; i < p.b.size(); ++i) m = std::max(m, p.b[i]);
      return m;
    };
  }
  throw std::invalid_argument("unknown functional id: " + id +
                              " (expected terminal, terminal_square, terminal_positive, "
                              "running_max)");
}

json estimate_to_json(const SublinearEstimate& estimate) {
  json scenarios = json::array();
  for (const auto& sm : estimate.scenario_means)
    scenarios.push_back({{"mean", sm.mean}, {"stderr", sm.stderr_}});
  double rate_min = estimate.argmax_control.empty() ? 0.0 : estimate.argmax_control.front();
  double rate_max = rate_min;
  for (double r : estimate.argmax_control) {
    rate_min = std::min(rate_min, r);
    rate_max = std::max(rate_max, r);
  }
  return json{{"value", estimate.value},
              {"argmax_scenario", estimate.argmax_scenario},
              {"argmax_control", {{"first_rate", estimate.argmax_control.empty()
                                                     ? 0.0
                                                     : estimate.argmax_control.front()},
                                  {"min_rate", rate_min},
                                  {"max_rate", rate_max}}},
              {"scenario_means", scenarios},
              {"paths_per_scenario", estimate.paths_per_scenario}};
}

}  // namespace

int run_skorokhod(const std::string& input_csv, const std::string& constraints_json,
                  const std::string& out_csv) {
  const SampledPath s = io::read_path_csv(input_csv);
  const ConstraintSpec spec = parse_constraint_spec(read_file(constraints_json));
  const std::filesystem::path base =
      std::filesystem::path(constraints_json).parent_path();
  const ConstraintPair constraints = build_constraints(spec, s.grid(), base);
  const SkorokhodSolution solution = solve(s, constraints);
  if (solution.step_exceeds_half_gap)
    std::cerr << "warning: an input step exceeds half the separation gap; the regulator "
                 "decomposition may not be minimal\n";
  io::write_skorokhod_csv(out_csv, s, solution);
  return 0;
}

int run_simulate(const std::string& config_file, const std::string& out_dir) {
  const RunConfig config = parse_config(read_file(config_file));
  const std::filesystem::path base = std::filesystem::path(config_file).parent_path();
  const TimeGrid grid = make_grid(config.grid);
  const ConstraintPair constraints =
      build_constraints(config.constraints, grid, base, config.tolerances);
  const SdeCoefficients coeffs = build_coefficients(config);
  const auto family = build_family(config, grid);

  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(config.out.empty() ? "runs" : config.out)
                      : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);

  PicardOptions options;
  options.tolerance = config.tolerances.picard;
  options.max_iterations = config.tolerances.max_iterations;
  options.clamp_start = config.tolerances.clamp_start;

  std::size_t gap_warnings = 0;
  const EnsembleSummary summary = ensemble_solve(
      config.x0, coeffs, constraints, family, grid, config.paths, config.seed, options,
      config.moment_exponent,
      [&](std::size_t scenario, std::size_t path, const GBMPath& gbm,
          const ReflectedSdeSolution& sol) {
        char name[64];
        std::snprintf(name, sizeof name, "path_s%02zu_p%05zu.csv", scenario, path);
        io::write_sde_path_csv(dir / name, gbm, sol);
        if (sol.step_exceeds_half_gap) ++gap_warnings;
      });

  json scenarios = json::array();
  for (const auto& sm : summary.scenarios)
    scenarios.push_back(
        {{"mean_sup_x_p", sm.mean_sup_x_p}, {"mean_sup_a_p", sm.mean_sup_a_p}});
  json failures = json::array();
  for (const auto& f : summary.failures)
    failures.push_back({{"scenario", f.scenario}, {"path", f.path}, {"message", f.message}});
  const json report{{"paths_per_scenario", summary.paths_per_scenario},
                    {"scenarios", scenarios},
                    {"moment_exponent", summary.moment_exponent},
                    {"sup_x_moment", summary.sup_x_moment},
                    {"sup_a_moment", summary.sup_a_moment},
                    {"argmax_scenario", summary.argmax_scenario},
                    {"apriori_driver", summary.apriori_driver},
                    {"apriori_constant", summary.apriori_constant},
                    {"seed", config.seed},
                    {"step_gap_warnings", gap_warnings},
                    {"failures", failures}};
  write_report((dir / "summary.json").string(), report);
  return summary.failures.empty() ? 0 : 1;
}

int run_expect(const std::string& functional_id, const std::string& config_file,
               const std::string& out_file) {
  const RunConfig config = parse_config(read_file(config_file));
  const TimeGrid grid = make_grid(config.grid);
  const auto family = build_family(config, grid);
  const PathFunctional functional = named_functional(functional_id);
  const PathFunctional negated = [&functional](const GBMPath& p) { return -functional(p); };

  const SublinearEstimate upper =
      sublinear_expectation(functional, family, grid, config.paths, config.seed);
  const SublinearEstimate negative =
      sublinear_expectation(negated, family, grid, config.paths, config.seed);

  json report{{"functional", functional_id},
              {"seed", config.seed},
              {"upper", estimate_to_json(upper)},
              {"lower", estimate_to_json(negative)}};
  report["lower"]["value"] = -negative.value;
  write_report(out_file, report);
  return 0;
}

int run_verify(const std::string& suite, std::size_t trials, std::uint64_t seed,
               const std::string& out_file) {
  using namespace verify;
  auto sized = [trials](std::size_t canonical) { return trials == 0 ? canonical : trials; };

  std::vector<PropertyReport> reports;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "stability") {
    reports.push_back(check_stability(sized(1000), seed));
    known = true;
  }
  if (all || suite == "constraint-monotonicity") {
    reports.push_back(check_constraint_monotonicity(sized(1000), seed));
    known = true;
  }
  if (all || suite == "input-monotonicity") {
    reports.push_back(check_input_monotonicity(sized(1000), seed));
    known = true;
  }
  if (all || suite == "comparison") {
    reports.push_back(check_comparison(sized(200), seed));
    known = true;
  }
  if (all || suite == "sde-monotonicity") {
    reports.push_back(check_sde_constraining_monotonicity(sized(200), seed));
    known = true;
  }
  if (all || suite == "gamma") {
    reports.push_back(check_gamma_convergence(sized(50), seed));
    known = true;
  }
  if (all || suite == "ito") {
    reports.push_back(check_ito_residual(sized(50), seed));
    known = true;
  }
  if (all || suite == "g-moments") {
    GMomentsConfig config;
    config.seed = seed;
    if (trials != 0) config.paths = trials;
    reports.push_back(check_g_moments(config));
    known = true;
  }
  if (all || suite == "well-formedness") {
    reports.push_back(check_reflected_well_formedness(sized(600), seed));
    known = true;
  }
  if (!known)
    throw std::invalid_argument(
        "unknown suite '" + suite +
        "' (expected all, stability, constraint-monotonicity, input-monotonicity, comparison, "
        "sde-monotonicity, gamma, ito, g-moments, well-formedness)");

  std::size_t failures = 0;
  json list = json::array();
  for (const auto& r : reports) {
    failures += r.failures;
    list.push_back(to_json(r));
  }
  write_report(out_file, json{{"seed", seed}, {"failures", failures}, {"reports", list}});
  return failures == 0 ? 0 : 1;
}

}  // namespace gskor::cli

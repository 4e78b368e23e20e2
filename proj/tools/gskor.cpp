#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gskor/cli.hpp"
#include "gskor/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-sided Skorokhod reflection and reflected SDEs under volatility uncertainty"};
  app.require_subcommand(1);

  std::string input, constraints, out, config, functional, suite = "all";
  std::size_t trials = 0;
  std::uint64_t seed = 1;

  auto* sk = app.add_subcommand("skorokhod", "Reflect a path CSV through a constraint pair");
  sk->add_option("--input", input, "input path CSV (header t,value)")->required();
  sk->add_option("--constraints", constraints, "constraint spec JSON")->required();
  sk->add_option("--out", out, "output CSV (t,s,x,k,k_r,k_l)")->required();

  auto* sim = app.add_subcommand("simulate", "Reflected G-SDE ensemble from a config file");
  sim->add_option("--config", config, "run config JSON")->required();
  sim->add_option("--out", out, "output directory (default: config 'out' or runs/)");

  auto* exp = app.add_subcommand("expect", "Sublinear expectation of a path functional");
  exp->add_option("--functional", functional,
                  "terminal | terminal_square | terminal_positive | running_max")
      ->required();
  exp->add_option("--config", config, "run config JSON")->required();
  exp->add_option("--out", out, "report file (default: stdout)");

  auto* ver = app.add_subcommand("verify", "Run property suites");
  ver->add_option("--suite", suite,
                  "all | stability | constraint-monotonicity | input-monotonicity | comparison | "
                  "sde-monotonicity | gamma | ito | g-moments | well-formedness");
  ver->add_option("--trials", trials, "trial count (0 = canonical per-suite size)");
  ver->add_option("--seed", seed, "randomization seed");
  ver->add_option("--out", out, "report file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sk->parsed()) return gskor::cli::run_skorokhod(input, constraints, out);
    if (sim->parsed()) return gskor::cli::run_simulate(config, out);
    if (exp->parsed()) return gskor::cli::run_expect(functional, config, out);
    return gskor::cli::run_verify(suite, trials, seed, out);
  } catch (const gskor::ConfigError& e) {
    nlohmann::json err{{"error", "config"}, {"issues", e.issues()}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", "runtime"}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  }
}

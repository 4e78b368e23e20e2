#pragma once

#include <cstdint>
#include <string>

namespace gskor::cli {

/// Reflects the CSV input path through the constraints in the JSON spec
/// and writes columns t,s,x,k,k_r,k_l.
int run_skorokhod(const std::string& input_csv, const std::string& constraints_json,
                  const std::string& out_csv);

/// Reflected-SDE ensemble from a config file: one CSV per path
/// (t,B,QV,X,A,A_r,A_l) under out_dir plus summary.json.
int run_simulate(const std::string& config_file, const std::string& out_dir);

/// Sublinear expectation of a named path functional; JSON report with the
/// upper estimate and the lower estimate -E_hat[-xi]. Functionals:
/// terminal, terminal_square, terminal_positive, running_max.
int run_expect(const std::string& functional_id, const std::string& config_file,
               const std::string& out_file);

/// Property suites. trials = 0 picks each suite's canonical campaign size.
/// Writes a JSON report; exit code is nonzero when any assertion failed.
int run_verify(const std::string& suite, std::size_t trials, std::uint64_t seed,
               const std::string& out_file);

}  // namespace gskor::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "gskor/constraints.hpp"
#include "gskor/gexp.hpp"
#include "gskor/gsde.hpp"

namespace gskor {

struct GridSpec {
  double horizon = 1.0;
  std::size_t steps = 4096;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::kConstant;
  std::size_t m = 5;
  std::size_t switches = 1;
};

/// Either a constant level or a reference to a path CSV file.
using PathRef = std::variant<double, std::string>;

struct ConstraintSpec {
  std::string kind = "band";  // band | rho | custom
  PathRef alpha{-1.0};
  PathRef beta{1.0};
  std::string lower_id;  // custom: registered evaluator ids
  std::string upper_id;
};

struct CoefficientSpec {
  std::string id = "constant";  // constant {c} | affine {a, b}
  std::map<std::string, double> params;
};

struct ToleranceSpec {
  double picard = 1e-10;
  std::size_t max_iterations = 50;
  double inverse = 1e-12;
  double bracket = 10.0;
  bool clamp_start = false;  // start Picard from clamp(x0) instead of 0
};

struct RunConfig {
  GridSpec grid;
  double sigma2_min = 0.25;
  double sigma2_max = 1.0;
  FamilySpec family;
  ConstraintSpec constraints;
  CoefficientSpec f{"constant", {{"c", 0.0}}};
  CoefficientSpec h{"constant", {{"c", 0.0}}};
  CoefficientSpec g{"constant", {{"c", 1.0}}};
  std::optional<double> lipschitz;  // defaults to the builtin slopes
  double x0 = 0.0;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  ToleranceSpec tolerances;
  double moment_exponent = 2.0;
  std::string out;
};

/// Parses and validates a config document. Unknown keys are rejected;
/// every issue is reported with its JSON pointer in one ConfigError.
RunConfig parse_config(const std::string& text);

/// Parses a standalone constraint spec document (the `skorokhod`
/// subcommand's --constraints file).
ConstraintSpec parse_constraint_spec(const std::string& text);

TimeGrid make_grid(const GridSpec& spec);
SampledPath resolve_path_ref(const PathRef& ref, const TimeGrid& grid,
                             const std::filesystem::path& base_dir);
ConstraintPair build_constraints(const ConstraintSpec& spec, const TimeGrid& grid,
                                 const std::filesystem::path& base_dir,
                                 const ToleranceSpec& tolerances = {});
SdeCoefficients build_coefficients(const RunConfig& config);
std::vector<ScenarioControl> build_family(const RunConfig& config, const TimeGrid& grid);

}  // namespace gskor

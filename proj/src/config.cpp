#include "gskor/config.hpp"

#include <algorithm>

#include <json.hpp>

#include "gskor/io.hpp"

namespace gskor {
namespace {

using nlohmann::json;

struct Issues {
  std::vector<std::string> list;
  void add(const std::string& pointer, const std::string& what) {
    list.push_back(pointer + ": " + what);
  }
};

template <std::size_t N>
void check_keys(const json& obj, const std::string& ptr, const char* const (&allowed)[N],
                Issues& issues) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) known = true;
    if (!known) issues.add(ptr + "/" + it.key(), "unknown key");
  }
}

bool take_number(const json& obj, const std::string& ptr, const char* key, double& out,
                 Issues& issues) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    issues.add(ptr + "/" + key, "expected a number");
    return false;
  }
  out = v.get<double>();
  return true;
}

bool take_uint(const json& obj, const std::string& ptr, const char* key, std::size_t& out,
               Issues& issues) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    issues.add(ptr + "/" + key, "expected a nonnegative integer");
    return false;
  }
  out = v.get<std::size_t>();
  return true;
}

bool take_string(const json& obj, const std::string& ptr, const char* key, std::string& out,
                 Issues& issues) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    issues.add(ptr + "/" + key, "expected a string");
    return false;
  }
  out = v.get<std::string>();
  return true;
}

void take_path_ref(const json& obj, const std::string& ptr, const char* key, PathRef& out,
                   Issues& issues) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (v.is_number())
    out = v.get<double>();
  else if (v.is_string())
    out = v.get<std::string>();
  else
    issues.add(ptr + "/" + key, "expected a number or a CSV file reference");
}

void parse_constraints_into(const json& obj, const std::string& ptr, ConstraintSpec& spec,
                            Issues& issues) {
  if (!obj.is_object()) {
    issues.add(ptr, "expected an object");
    return;
  }
  static const char* allowed[] = {"kind", "alpha", "beta", "lower_id", "upper_id"};
  check_keys(obj, ptr, allowed, issues);
  take_string(obj, ptr, "kind", spec.kind, issues);
  take_path_ref(obj, ptr, "alpha", spec.alpha, issues);
  take_path_ref(obj, ptr, "beta", spec.beta, issues);
  take_string(obj, ptr, "lower_id", spec.lower_id, issues);
  take_string(obj, ptr, "upper_id", spec.upper_id, issues);
  if (spec.kind != "band" && spec.kind != "rho" && spec.kind != "custom")
    issues.add(ptr + "/kind", "must be one of band, rho, custom");
  if (spec.kind == "custom" && (spec.lower_id.empty() || spec.upper_id.empty()))
    issues.add(ptr, "custom constraints need lower_id and upper_id");
}

void parse_coefficient_into(const json& obj, const std::string& ptr, CoefficientSpec& spec,
                            Issues& issues) {
  if (!obj.is_object()) {
    issues.add(ptr, "expected an object");
    return;
  }
  if (!take_string(obj, ptr, "id", spec.id, issues) && !obj.contains("id"))
    issues.add(ptr + "/id", "missing coefficient id");
  std::vector<std::string> allowed_params;
  if (spec.id == "constant")
    allowed_params = {"c"};
  else if (spec.id == "affine")
    allowed_params = {"a", "b"};
  else {
    issues.add(ptr + "/id", "unknown coefficient id '" + spec.id + "'");
    return;
  }
  spec.params.clear();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (it.key() == "id") continue;
    const bool known =
        std::find(allowed_params.begin(), allowed_params.end(), it.key()) != allowed_params.end();
    if (!known) {
      issues.add(ptr + "/" + it.key(), "unknown parameter for id '" + spec.id + "'");
      continue;
    }
    if (!it.value().is_number()) {
      issues.add(ptr + "/" + it.key(), "expected a number");
      continue;
    }
    spec.params[it.key()] = it.value().get<double>();
  }
}

json parse_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError({"/: not valid JSON"});
  if (!doc.is_object()) throw ConfigError({"/: expected a JSON object"});
  return doc;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const json doc = parse_text(text);
  Issues issues;
  RunConfig config;

  static const char* allowed[] = {"grid",         "sigma2_min", "sigma2_max", "family",
                                  "constraints",  "coefficients", "paths",    "seed",
                                  "x0",           "tolerances", "moment_exponent", "out"};
  check_keys(doc, "", allowed, issues);

  if (doc.contains("grid")) {
    const json& grid = doc.at("grid");
    if (!grid.is_object()) {
      issues.add("/grid", "expected an object");
    } else {
      static const char* grid_keys[] = {"T", "n"};
      check_keys(grid, "/grid", grid_keys, issues);
      take_number(grid, "/grid", "T", config.grid.horizon, issues);
      take_uint(grid, "/grid", "n", config.grid.steps, issues);
    }
  }
  if (!(config.grid.horizon > 0.0)) issues.add("/grid/T", "must be > 0");
  if (config.grid.steps < 1) issues.add("/grid/n", "must be >= 1");

  take_number(doc, "", "sigma2_min", config.sigma2_min, issues);
  take_number(doc, "", "sigma2_max", config.sigma2_max, issues);
  if (config.sigma2_min < 0.0) issues.add("/sigma2_min", "must be >= 0");
  if (config.sigma2_min > config.sigma2_max)
    issues.add("/sigma2_min", "must not exceed sigma2_max");

  if (doc.contains("family")) {
    const json& fam = doc.at("family");
    if (!fam.is_object()) {
      issues.add("/family", "expected an object");
    } else {
      static const char* family_keys[] = {"kind", "m", "switches"};
      check_keys(fam, "/family", family_keys, issues);
      std::string kind = "constant";
      take_string(fam, "/family", "kind", kind, issues);
      if (kind == "constant")
        config.family.kind = FamilyKind::kConstant;
      else if (kind == "bang-bang")
        config.family.kind = FamilyKind::kBangBang;
      else
        issues.add("/family/kind", "must be 'constant' or 'bang-bang'");
      take_uint(fam, "/family", "m", config.family.m, issues);
      take_uint(fam, "/family", "switches", config.family.switches, issues);
    }
  }
  if (config.family.kind == FamilyKind::kConstant && config.family.m < 2)
    issues.add("/family/m", "constant family needs m >= 2");
  if (config.family.kind == FamilyKind::kBangBang && config.family.switches < 1)
    issues.add("/family/switches", "bang-bang family needs switches >= 1");

  if (doc.contains("constraints"))
    parse_constraints_into(doc.at("constraints"), "/constraints", config.constraints, issues);

  if (doc.contains("coefficients")) {
    const json& coeffs = doc.at("coefficients");
    if (!coeffs.is_object()) {
      issues.add("/coefficients", "expected an object");
    } else {
      static const char* coeff_keys[] = {"f", "h", "g", "lipschitz"};
      check_keys(coeffs, "/coefficients", coeff_keys, issues);
      if (coeffs.contains("f"))
        parse_coefficient_into(coeffs.at("f"), "/coefficients/f", config.f, issues);
      if (coeffs.contains("h"))
        parse_coefficient_into(coeffs.at("h"), "/coefficients/h", config.h, issues);
      if (coeffs.contains("g"))
        parse_coefficient_into(coeffs.at("g"), "/coefficients/g", config.g, issues);
      double lipschitz = 0.0;
      if (take_number(coeffs, "/coefficients", "lipschitz", lipschitz, issues)) {
        if (lipschitz < 0.0)
          issues.add("/coefficients/lipschitz", "must be >= 0");
        else
          config.lipschitz = lipschitz;
      }
    }
  }

  take_uint(doc, "", "paths", config.paths, issues);
  if (config.paths < 1) issues.add("/paths", "must be >= 1");
  std::size_t seed = config.seed;
  if (take_uint(doc, "", "seed", seed, issues)) config.seed = seed;
  take_number(doc, "", "x0", config.x0, issues);

  if (doc.contains("tolerances")) {
    const json& tol = doc.at("tolerances");
    if (!tol.is_object()) {
      issues.add("/tolerances", "expected an object");
    } else {
      static const char* tol_keys[] = {"picard", "max_iterations", "inverse", "bracket",
                                       "clamp_start"};
      check_keys(tol, "/tolerances", tol_keys, issues);
      take_number(tol, "/tolerances", "picard", config.tolerances.picard, issues);
      take_uint(tol, "/tolerances", "max_iterations", config.tolerances.max_iterations, issues);
      take_number(tol, "/tolerances", "inverse", config.tolerances.inverse, issues);
      take_number(tol, "/tolerances", "bracket", config.tolerances.bracket, issues);
      if (tol.contains("clamp_start")) {
        if (tol.at("clamp_start").is_boolean())
          config.tolerances.clamp_start = tol.at("clamp_start").get<bool>();
        else
          issues.add("/tolerances/clamp_start", "expected a boolean");
      }
    }
  }
  if (!(config.tolerances.picard > 0.0)) issues.add("/tolerances/picard", "must be > 0");
  if (config.tolerances.max_iterations < 1)
    issues.add("/tolerances/max_iterations", "must be >= 1");
  if (!(config.tolerances.inverse > 0.0)) issues.add("/tolerances/inverse", "must be > 0");
  if (!(config.tolerances.bracket > 0.0)) issues.add("/tolerances/bracket", "must be > 0");

  take_number(doc, "", "moment_exponent", config.moment_exponent, issues);
  if (!(config.moment_exponent >= 1.0)) issues.add("/moment_exponent", "must be >= 1");
  take_string(doc, "", "out", config.out, issues);

  if (!issues.list.empty()) throw ConfigError(std::move(issues.list));
  return config;
}

ConstraintSpec parse_constraint_spec(const std::string& text) {
  const json doc = parse_text(text);
  Issues issues;
  ConstraintSpec spec;
  parse_constraints_into(doc, "", spec, issues);
  if (!issues.list.empty()) throw ConfigError(std::move(issues.list));
  return spec;
}

TimeGrid make_grid(const GridSpec& spec) { return TimeGrid(spec.horizon, spec.steps); }

SampledPath resolve_path_ref(const PathRef& ref, const TimeGrid& grid,
                             const std::filesystem::path& base_dir) {
  if (std::holds_alternative<double>(ref))
    return SampledPath::constant(grid, std::get<double>(ref));
  const std::filesystem::path file = base_dir / std::get<std::string>(ref);
  SampledPath path = io::read_path_csv(file);
  if (!(path.grid() == grid))
    throw GridMismatchError("referenced path " + file.string() +
                            " does not match the configured grid");
  return path;
}

ConstraintPair build_constraints(const ConstraintSpec& spec, const TimeGrid& grid,
                                 const std::filesystem::path& base_dir,
                                 const ToleranceSpec& tolerances) {
  SampledPath alpha = resolve_path_ref(spec.alpha, grid, base_dir);
  SampledPath beta = resolve_path_ref(spec.beta, grid, base_dir);
  if (spec.kind == "band") return ConstraintPair::band(alpha, beta);
  if (spec.kind == "rho") return ConstraintPair::rho(alpha, beta);
  ConstraintFunction lower = builtin_constraint(spec.lower_id, alpha);
  ConstraintFunction upper = builtin_constraint(spec.upper_id, beta);
  lower.inverse_tolerance = upper.inverse_tolerance = tolerances.inverse;
  lower.bracket_halfwidth = upper.bracket_halfwidth = tolerances.bracket;
  return ConstraintPair::custom(std::move(lower), std::move(upper), grid);
}

namespace {

double param_or(const CoefficientSpec& spec, const char* key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

std::function<double(double, double)> build_one(const CoefficientSpec& spec, double& slope) {
  if (spec.id == "constant") {
    const double c = param_or(spec, "c", 0.0);
    slope = 0.0;
    return [c](double, double) { return c; };
  }
  if (spec.id == "affine") {
    const double a = param_or(spec, "a", 0.0);
    const double b = param_or(spec, "b", 0.0);
    slope = std::abs(a);
    return [a, b](double, double x) { return a * x + b; };
  }
  throw std::invalid_argument("unknown coefficient id: " + spec.id);
}

}  // namespace

SdeCoefficients build_coefficients(const RunConfig& config) {
  SdeCoefficients coeffs;
  double sf = 0.0, sh = 0.0, sg = 0.0;
  coeffs.drift = build_one(config.f, sf);
  coeffs.qv_drift = build_one(config.h, sh);
  coeffs.diffusion = build_one(config.g, sg);
  coeffs.lipschitz = config.lipschitz.value_or(std::max({sf, sh, sg}));
  return coeffs;
}

std::vector<ScenarioControl> build_family(const RunConfig& config, const TimeGrid& grid) {
  const VolatilityBounds bounds(config.sigma2_min, config.sigma2_max);
  return scenario_family(bounds, config.family.kind, config.family.m, config.family.switches,
                         grid);
}

}  // namespace gskor

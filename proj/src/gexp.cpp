#include "gskor/gexp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gskor/parallel.hpp"

namespace gskor {

VolatilityBounds::VolatilityBounds(double lo, double hi) : sigma2_min(lo), sigma2_max(hi) {
  if (!(lo >= 0.0) || !(hi >= lo) || !(hi > 0.0) || !std::isfinite(hi))
    throw std::invalid_argument("VolatilityBounds: need 0 <= sigma2_min <= sigma2_max, max > 0");
}

ScenarioControl::ScenarioControl(std::vector<double> rates, const VolatilityBounds& bounds)
    : rates_(std::move(rates)) {
  if (rates_.empty()) throw std::invalid_argument("ScenarioControl: empty rate schedule");
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    if (!(rates_[i] >= bounds.sigma2_min && rates_[i] <= bounds.sigma2_max))
      throw std::invalid_argument("ScenarioControl: rate at step " + std::to_string(i) +
                                  " outside volatility bounds");
  }
}

namespace {

GBMPath build_path(const ScenarioControl& control, const TimeGrid& grid,
                   const rng::PathStream& stream, bool realized_qv) {
  if (control.steps() != grid.steps())
    throw GridMismatchError("scenario control has " + std::to_string(control.steps()) +
                            " steps, grid has " + std::to_string(grid.steps()));
  const double dt = grid.dt();
  std::vector<double> b(grid.nodes()), qv(grid.nodes());
  b[0] = 0.0;
  qv[0] = 0.0;
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    const double variance = control[i] * dt;
    const double db = std::sqrt(variance) * stream.normal(i);
    b[i + 1] = b[i] + db;
    qv[i + 1] = qv[i] + (realized_qv ? db * db : variance);
  }
  return GBMPath{SampledPath(grid, std::move(b)), SampledPath(grid, std::move(qv))};
}

}  // namespace

GBMPath simulate_path(const ScenarioControl& control, const TimeGrid& grid,
                      const rng::PathStream& stream) {
  return build_path(control, grid, stream, false);
}

GBMPath simulate_path_realized_qv(const ScenarioControl& control, const TimeGrid& grid,
                                  const rng::PathStream& stream) {
  return build_path(control, grid, stream, true);
}

std::vector<ScenarioControl> scenario_family(const VolatilityBounds& bounds, FamilyKind kind,
                                             std::size_t m, std::size_t switches,
                                             const TimeGrid& grid) {
  std::vector<ScenarioControl> family;
  const std::size_t steps = grid.steps();
  if (kind == FamilyKind::kConstant) {
    if (m < 2) throw std::invalid_argument("scenario_family: constant family needs m >= 2");
    for (std::size_t j = 0; j < m; ++j) {
      const double rate =
          bounds.sigma2_min + (bounds.sigma2_max - bounds.sigma2_min) *
                                  static_cast<double>(j) / static_cast<double>(m - 1);
      family.emplace_back(std::vector<double>(steps, rate), bounds);
    }
    return family;
  }
  if (switches < 1) throw std::invalid_argument("scenario_family: bang-bang needs switches >= 1");
  const std::size_t segments = switches + 1;
  for (int phase = 0; phase < 2; ++phase) {
    std::vector<double> rates(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const std::size_t segment = i * segments / steps;
      const bool high = (segment + static_cast<std::size_t>(phase)) % 2 == 1;
      rates[i] = high ? bounds.sigma2_max : bounds.sigma2_min;
    }
    family.emplace_back(std::move(rates), bounds);
  }
  return family;
}

SublinearEstimate sublinear_expectation(const PathFunctional& functional,
                                        const std::vector<ScenarioControl>& family,
                                        const TimeGrid& grid, std::size_t paths_per_scenario,
                                        std::uint64_t base_seed) {
  if (family.empty()) throw std::invalid_argument("sublinear_expectation: empty scenario family");
  if (paths_per_scenario == 0)
    throw std::invalid_argument("sublinear_expectation: need at least one path");

  SublinearEstimate estimate;
  estimate.paths_per_scenario = paths_per_scenario;
  estimate.scenario_means.resize(family.size());

  std::vector<double> values(paths_per_scenario);
  for (std::size_t scenario = 0; scenario < family.size(); ++scenario) {
    parallel_for(paths_per_scenario, [&](std::size_t path) {
      const rng::PathStream stream(base_seed, scenario, path);
      const double value = functional(simulate_path(family[scenario], grid, stream));
      if (!std::isfinite(value))
        throw NumericError("functional returned non-finite value (scenario=" +
                           std::to_string(scenario) + ", path=" + std::to_string(path) + ")");
      values[path] = value;
    });

    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(paths_per_scenario);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double stderr_ =
        paths_per_scenario > 1
            ? std::sqrt(ss / static_cast<double>(paths_per_scenario - 1) /
                        static_cast<double>(paths_per_scenario))
            : 0.0;
    estimate.scenario_means[scenario] = ScenarioMean{mean, stderr_};
  }

  estimate.argmax_scenario = 0;
  for (std::size_t j = 1; j < family.size(); ++j) {
    if (estimate.scenario_means[j].mean > estimate.scenario_means[estimate.argmax_scenario].mean)
      estimate.argmax_scenario = j;
  }
  estimate.value = estimate.scenario_means[estimate.argmax_scenario].mean;
  estimate.argmax_control = family[estimate.argmax_scenario].rates();
  return estimate;
}

QvBoundsReport quadratic_variation_bounds_check(const std::vector<ScenarioControl>& family,
                                                const VolatilityBounds& bounds,
                                                const TimeGrid& grid, std::size_t paths,
                                                std::uint64_t base_seed) {
  QvBoundsReport report;
  for (std::size_t scenario = 0; scenario < family.size(); ++scenario) {
    for (std::size_t path = 0; path < paths; ++path) {
      const GBMPath gbm =
          simulate_path(family[scenario], grid, rng::PathStream(base_seed, scenario, path));
      for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const double t = grid.node(i);
        const double slack = 1e-12 * (1.0 + bounds.sigma2_max * t);
        const double low = bounds.sigma2_min * t - slack;
        const double high = bounds.sigma2_max * t + slack;
        ++report.checks;
        if (gbm.qv[i] < low || gbm.qv[i] > high) {
          ++report.violations;
          report.worst_excess = std::max(
              report.worst_excess, std::max(low - gbm.qv[i], gbm.qv[i] - high));
        }
      }
    }
  }
  return report;
}

}  // namespace gskor

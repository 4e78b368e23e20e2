#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gskor/path.hpp"
#include "gskor/rng.hpp"

namespace gskor {

/// Variance-rate interval [sigma2_min, sigma2_max] of the driving noise.
/// Equal bounds are accepted and collapse to a classical Brownian motion.
struct VolatilityBounds {
  VolatilityBounds(double sigma2_min, double sigma2_max);
  double sigma2_min;
  double sigma2_max;
};

/// Piecewise-constant volatility control: one variance rate per grid step,
/// each inside the bounds (inclusive).
class ScenarioControl {
 public:
  ScenarioControl(std::vector<double> rates, const VolatilityBounds& bounds);

  std::size_t steps() const noexcept { return rates_.size(); }
  double operator[](std::size_t i) const noexcept { return rates_[i]; }
  const std::vector<double>& rates() const noexcept { return rates_; }

 private:
  std::vector<double> rates_;
};

/// One driver path: B with B_0 = 0 and its quadratic variation clock,
/// accrued as the compensator dQV_i = v_i dt (so the bounds
/// sigma2_min*t <= QV_t <= sigma2_max*t hold at every grid size).
struct GBMPath {
  SampledPath b;
  SampledPath qv;
};

/// delta B_i = sqrt(v_i dt) Z_i with Z_i drawn from the (seed, scenario,
/// path) substream; bitwise deterministic in its arguments.
GBMPath simulate_path(const ScenarioControl& control, const TimeGrid& grid,
                      const rng::PathStream& stream);

/// Realized-quadratic-variation variant: dQV_i = (delta B_i)^2. Diagnostic
/// only; the compensator clock is what the solvers consume.
GBMPath simulate_path_realized_qv(const ScenarioControl& control, const TimeGrid& grid,
                                  const rng::PathStream& stream);

enum class FamilyKind { kConstant, kBangBang };

/// Finite approximating family of volatility scenarios.
/// - kConstant: m controls with rates evenly spaced across the bounds.
/// - kBangBang: the two phase variants alternating between the extreme
///   rates at `switches` equispaced change points.
std::vector<ScenarioControl> scenario_family(const VolatilityBounds& bounds, FamilyKind kind,
                                             std::size_t m, std::size_t switches,
                                             const TimeGrid& grid);

struct ScenarioMean {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Upper expectation estimate: max over scenarios of the Monte-Carlo mean,
/// with the maximizing control (first index on ties).
struct SublinearEstimate {
  double value = 0.0;
  std::size_t argmax_scenario = 0;
  std::vector<double> argmax_control;
  std::vector<ScenarioMean> scenario_means;
  std::size_t paths_per_scenario = 0;
};

using PathFunctional = std::function<double(const GBMPath&)>;

/// E_hat[xi] ~= max_j mean_j, scenario j simulated with substreams derived
/// from (base_seed, j, path index). Per-path values are stored and reduced
/// in fixed index order, so the estimate is independent of the parallel
/// schedule. Non-finite functional values raise NumericError carrying the
/// (scenario, path) coordinates.
SublinearEstimate sublinear_expectation(const PathFunctional& functional,
                                        const std::vector<ScenarioControl>& family,
                                        const TimeGrid& grid, std::size_t paths_per_scenario,
                                        std::uint64_t base_seed);

struct QvBoundsReport {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // largest overshoot past a bound
};

/// Asserts sigma2_min*t_i <= QV_i <= sigma2_max*t_i node-wise (round-off
/// slack 1e-12) over simulated paths; reports violations rather than throws.
QvBoundsReport quadratic_variation_bounds_check(const std::vector<ScenarioControl>& family,
                                                const VolatilityBounds& bounds,
                                                const TimeGrid& grid, std::size_t paths,
                                                std::uint64_t base_seed);

}  // namespace gskor

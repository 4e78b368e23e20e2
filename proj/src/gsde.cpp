#include "gskor/gsde.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "gskor/parallel.hpp"
#include "gskor/rng.hpp"

namespace gskor {
namespace {

double eval_or_throw(const std::function<double(double, double)>& fn, const char* name, double t,
                     double x) {
  const double v = fn(t, x);
  if (!std::isfinite(v))
    throw NumericError(std::string(name) + " returned non-finite value at t=" +
                       std::to_string(t) + ", x=" + std::to_string(x));
  return v;
}

}  // namespace

void SdeCoefficients::validate(const TimeGrid& grid) const {
  if (!drift || !qv_drift || !diffusion)
    throw std::invalid_argument("SdeCoefficients: all three evaluators must be set");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
    throw std::invalid_argument("SdeCoefficients: bad Lipschitz constant");
  rng::SplitMix gen(0xc0effedu);
  const std::function<double(double, double)>* fns[] = {&drift, &qv_drift, &diffusion};
  const char* names[] = {"drift", "qv_drift", "diffusion"};
  for (int which = 0; which < 3; ++which) {
    for (int probe = 0; probe < 16; ++probe) {
      const double t = grid.node(gen.index(grid.nodes()));
      const double x = gen.uniform(-10.0, 10.0);
      const double y = gen.uniform(-10.0, 10.0);
      const double fx = eval_or_throw(*fns[which], names[which], t, x);
      const double fy = eval_or_throw(*fns[which], names[which], t, y);
      const double bound = lipschitz * std::abs(x - y) + 1e-9;
      if (std::abs(fx - fy) > bound)
        throw std::invalid_argument(std::string("SdeCoefficients: ") + names[which] +
                                    " violates declared Lipschitz constant at t=" +
                                    std::to_string(t));
    }
  }
}

SampledPath euler_functional(const SdeCoefficients& coeffs, const SampledPath& state,
                             const GBMPath& path, double x0) {
  require_same_grid(state.grid(), path.b.grid());
  require_same_grid(path.b.grid(), path.qv.grid());
  const TimeGrid& grid = state.grid();
  const double dt = grid.dt();
  std::vector<double> s(grid.nodes());
  s[0] = x0;
  for (std::size_t i = 0; i + 1 < grid.nodes(); ++i) {
    const double t = grid.node(i);
    const double x = state[i];
    const double f = eval_or_throw(coeffs.drift, "drift", t, x);
    const double h = eval_or_throw(coeffs.qv_drift, "qv_drift", t, x);
    const double g = eval_or_throw(coeffs.diffusion, "diffusion", t, x);
    s[i + 1] = s[i] + f * dt + h * (path.qv[i + 1] - path.qv[i]) + g * (path.b[i + 1] - path.b[i]);
  }
  return SampledPath(grid, std::move(s));
}

SampledPath solve_unreflected(double x0, const SdeCoefficients& coeffs, const GBMPath& path) {
  require_same_grid(path.b.grid(), path.qv.grid());
  const TimeGrid& grid = path.b.grid();
  const double dt = grid.dt();
  std::vector<double> x(grid.nodes());
  x[0] = x0;
  for (std::size_t i = 0; i + 1 < grid.nodes(); ++i) {
    const double t = grid.node(i);
    const double f = eval_or_throw(coeffs.drift, "drift", t, x[i]);
    const double h = eval_or_throw(coeffs.qv_drift, "qv_drift", t, x[i]);
    const double g = eval_or_throw(coeffs.diffusion, "diffusion", t, x[i]);
    x[i + 1] =
        x[i] + f * dt + h * (path.qv[i + 1] - path.qv[i]) + g * (path.b[i + 1] - path.b[i]);
  }
  return SampledPath(grid, std::move(x));
}

ReflectedSdeSolution solve_reflected(double x0, const SdeCoefficients& coeffs,
                                     const ConstraintPair& constraints, const GBMPath& path,
                                     const PicardOptions& options) {
  if (!(options.tolerance > 0.0))
    throw std::invalid_argument("solve_reflected: tolerance must be positive");
  coeffs.validate(path.b.grid());
  require_same_grid(path.b.grid(), constraints.grid());
  const TimeGrid& grid = path.b.grid();

  SampledPath state =
      options.clamp_start
          ? SampledPath::constant(grid, std::clamp(x0, constraints.lower_obstacle()[0],
                                                   constraints.upper_obstacle()[0]))
          : SampledPath::zero(grid);

  std::vector<double> distances;
  std::size_t reflections = 0;
  bool converged = false;
  for (std::size_t m = 0; m < options.max_iterations; ++m) {
    const SampledPath s = euler_functional(coeffs, state, path, x0);
    SkorokhodSolution reflected = solve(s, constraints);
    ++reflections;
    const double d = sup_distance(reflected.x, state);
    distances.push_back(d);
    state = std::move(reflected.x);
    if (d <= options.tolerance) {
      converged = true;
      break;
    }
  }

  // One more pass so the returned pair is exactly the reflection of the
  // returned Euler path.
  SampledPath euler = euler_functional(coeffs, state, path, x0);
  SkorokhodSolution last = solve(euler, constraints);
  ++reflections;

  ReflectedSdeSolution out{std::move(last.x),
                           std::move(last.k),
                           std::move(last.k_r),
                           std::move(last.k_l),
                           std::move(euler),
                           reflections,
                           0.0,
                           0.0,
                           std::move(distances),
                           converged,
                           last.flat_off_lower,
                           last.flat_off_upper,
                           last.step_exceeds_half_gap};
  out.picard_residual = sup_distance(out.x, state);

  const SampledPath replay = euler_functional(coeffs, out.x, path, x0);
  double resid = 0.0;
  for (std::size_t i = 0; i < out.x.size(); ++i)
    resid = std::max(resid, std::abs(out.x[i] - replay[i] - out.a[i]));
  out.equation_residual = resid;
  return out;
}

namespace {

double sup_abs(const SampledPath& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i]));
  return m;
}

/// Driver of the a priori moment bound for one path's constraint pair.
double apriori_driver(double x0, const SdeCoefficients& coeffs, const ConstraintPair& pair,
                      const TimeGrid& grid, double p) {
  const double dt = grid.dt();
  double f_term = 0.0, h_term = 0.0, g_term = 0.0;
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    const double t = grid.node(i);
    f_term += std::pow(std::abs(coeffs.drift(t, 0.0)), p) * dt;
    h_term += std::pow(std::abs(coeffs.qv_drift(t, 0.0)), p) * dt;
    const double g = coeffs.diffusion(t, 0.0);
    g_term += g * g * dt;
  }
  return std::pow(std::abs(x0), p) + f_term + h_term + std::pow(g_term, 0.5 * p) +
         std::pow(sup_abs(pair.lower_obstacle()), p) + std::pow(sup_abs(pair.upper_obstacle()), p);
}

}  // namespace

EnsembleSummary ensemble_solve(double x0, const SdeCoefficients& coeffs,
                               const ObstacleProvider& obstacles,
                               const std::vector<ScenarioControl>& family, const TimeGrid& grid,
                               std::size_t paths_per_scenario, std::uint64_t base_seed,
                               const PicardOptions& options, double moment_exponent,
                               const SolutionSink& sink) {
  if (family.empty()) throw std::invalid_argument("ensemble_solve: empty scenario family");
  if (paths_per_scenario == 0) throw std::invalid_argument("ensemble_solve: need paths >= 1");

  EnsembleSummary summary;
  summary.moment_exponent = moment_exponent;
  summary.paths_per_scenario = paths_per_scenario;
  summary.scenarios.resize(family.size());

  struct Slot {
    std::optional<GBMPath> gbm;
    std::optional<ReflectedSdeSolution> solution;
    double driver = 0.0;
    std::string error;
  };

  // Paths are solved in fixed-size blocks: memory stays bounded and the
  // block-sequential reduction keeps results identical for any worker count.
  constexpr std::size_t kBlock = 128;
  double driver_sum = 0.0;
  std::size_t driver_count = 0;
  for (std::size_t scenario = 0; scenario < family.size(); ++scenario) {
    double sum_x = 0.0, sum_a = 0.0;
    std::size_t ok = 0;
    std::vector<Slot> slots;
    for (std::size_t begin = 0; begin < paths_per_scenario; begin += kBlock) {
      const std::size_t count = std::min(kBlock, paths_per_scenario - begin);
      slots.assign(count, Slot{});
      parallel_for(count, [&](std::size_t offset) {
        const std::size_t p = begin + offset;
        Slot& slot = slots[offset];
        try {
          const rng::PathStream stream(base_seed, scenario, p);
          slot.gbm = simulate_path(family[scenario], grid, stream);
          const ConstraintPair pair = obstacles(scenario, p, *slot.gbm);
          slot.driver = apriori_driver(x0, coeffs, pair, grid, moment_exponent);
          slot.solution = solve_reflected(x0, coeffs, pair, *slot.gbm, options);
          if (!slot.solution->converged)
            slot.error = "picard did not converge within " +
                         std::to_string(options.max_iterations) + " iterations";
        } catch (const std::exception& e) {
          slot.error = e.what();
          slot.solution.reset();
        }
      });

      for (std::size_t offset = 0; offset < count; ++offset) {
        const std::size_t p = begin + offset;
        const Slot& slot = slots[offset];
        if (!slot.error.empty())
          summary.failures.push_back(EnsembleFailure{scenario, p, slot.error});
        if (!slot.solution) continue;
        sum_x += std::pow(sup_abs(slot.solution->x), moment_exponent);
        sum_a += std::pow(sup_abs(slot.solution->a), moment_exponent);
        driver_sum += slot.driver;
        ++driver_count;
        ++ok;
        if (sink) sink(scenario, p, *slot.gbm, *slot.solution);
      }
    }
    if (ok > 0) {
      summary.scenarios[scenario].mean_sup_x_p = sum_x / static_cast<double>(ok);
      summary.scenarios[scenario].mean_sup_a_p = sum_a / static_cast<double>(ok);
    }
  }

  summary.argmax_scenario = 0;
  for (std::size_t j = 1; j < family.size(); ++j) {
    if (summary.scenarios[j].mean_sup_x_p > summary.scenarios[summary.argmax_scenario].mean_sup_x_p)
      summary.argmax_scenario = j;
  }
  summary.sup_x_moment = summary.scenarios[summary.argmax_scenario].mean_sup_x_p;
  for (const auto& s : summary.scenarios)
    summary.sup_a_moment = std::max(summary.sup_a_moment, s.mean_sup_a_p);
  if (driver_count > 0) {
    summary.apriori_driver = driver_sum / static_cast<double>(driver_count);
    if (summary.apriori_driver > 0.0)
      summary.apriori_constant =
          (summary.sup_x_moment + summary.sup_a_moment) / summary.apriori_driver;
  }
  return summary;
}

EnsembleSummary ensemble_solve(double x0, const SdeCoefficients& coeffs,
                               const ConstraintPair& constraints,
                               const std::vector<ScenarioControl>& family, const TimeGrid& grid,
                               std::size_t paths_per_scenario, std::uint64_t base_seed,
                               const PicardOptions& options, double moment_exponent,
                               const SolutionSink& sink) {
  return ensemble_solve(
      x0, coeffs,
      [&constraints](std::size_t, std::size_t, const GBMPath&) { return constraints; }, family,
      grid, paths_per_scenario, base_seed, options, moment_exponent, sink);
}

}  // namespace gskor

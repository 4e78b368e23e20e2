#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gskor/constraints.hpp"
#include "gskor/gexp.hpp"
#include "gskor/skorokhod.hpp"

namespace gskor {

/// Coefficients of dX = f dt + h d<B> + g dB, with the diffusion named in
/// full to keep it apart from the constraint functions. `lipschitz` is the
/// declared joint constant; it is spot-checked on sampled pairs, not
/// proven.
struct SdeCoefficients {
  std::function<double(double t, double x)> drift;      // f, against dt
  std::function<double(double t, double x)> qv_drift;   // h, against d<B>
  std::function<double(double t, double x)> diffusion;  // g, against dB
  double lipschitz = 1.0;

  void validate(const TimeGrid& grid) const;
};

/// Left-endpoint Euler accumulation of the coefficient integrals along a
/// frozen state path:
///   S_0 = x0,  S_{i+1} = S_i + f(t_i, X_i) dt + h(t_i, X_i) dQV_i
///                          + g(t_i, X_i) dB_i.
/// Non-finite coefficient values raise NumericError with coordinates.
SampledPath euler_functional(const SdeCoefficients& coeffs, const SampledPath& state,
                             const GBMPath& path, double x0);

/// Plain Euler recursion with the state fed back each step (no reflection).
SampledPath solve_unreflected(double x0, const SdeCoefficients& coeffs, const GBMPath& path);

struct PicardOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 50;
  // Start the iteration from clamp(x0) instead of the zero path. Faster on
  // bands far from the origin; off by default to keep the canonical start.
  bool clamp_start = false;
};

struct ReflectedSdeSolution {
  SampledPath x;       // X
  SampledPath a;       // A = X - S
  MonotonePath a_r;    // pushes up
  MonotonePath a_l;    // pulls down
  SampledPath euler;   // the S whose reflection produced (x, a)
  std::size_t picard_iterations = 0;   // reflection applications
  double picard_residual = 0.0;        // sup |x - previous iterate|
  double equation_residual = 0.0;      // sup |X - x0 - Euler(X) - A|
  std::vector<double> picard_distances;  // d_m = sup|X^{m+1} - X^m|
  bool converged = false;
  double flat_off_lower = 0.0;
  double flat_off_upper = 0.0;
  bool step_exceeds_half_gap = false;
};

/// Picard iteration X^0 = 0, (X^{m+1}, A^{m+1}) = reflection of the Euler
/// functional of X^m, run until sup-distance <= tolerance or max_iterations.
/// A final reflection of the converged Euler path produces the returned
/// pair, so re-reflecting `euler` reproduces (x, a) identically.
/// Non-convergence is reported through `converged`, never thrown.
ReflectedSdeSolution solve_reflected(double x0, const SdeCoefficients& coeffs,
                                     const ConstraintPair& constraints, const GBMPath& path,
                                     const PicardOptions& options = {});

/// Per-(scenario, path) constraint pairs; lets obstacles be simulated
/// processes. Must be pure in its arguments.
using ObstacleProvider =
    std::function<ConstraintPair(std::size_t scenario, std::size_t path, const GBMPath&)>;

struct EnsembleFailure {
  std::size_t scenario = 0;
  std::size_t path = 0;
  std::string message;
};

struct ScenarioMoments {
  double mean_sup_x_p = 0.0;  // mean over paths of sup_t |X_t|^p
  double mean_sup_a_p = 0.0;  // mean over paths of sup_t |A_t|^p
};

struct EnsembleSummary {
  std::vector<ScenarioMoments> scenarios;
  double sup_x_moment = 0.0;  // max over scenarios of mean sup|X|^p
  double sup_a_moment = 0.0;
  std::size_t argmax_scenario = 0;
  double moment_exponent = 2.0;
  std::size_t paths_per_scenario = 0;
  // Diagnostic rendering of the a priori moment bound: the bound's driver
  // |x0|^p + int|f(t,0)|^p dt + int|h(t,0)|^p dt + (int g(t,0)^2 dt)^{p/2}
  //        + sup|lower|^p + sup|upper|^p
  // averaged over paths, and the fitted ratio (moments / driver). Reported
  // only; the bound's constant is not something to assert against.
  double apriori_driver = 0.0;
  double apriori_constant = 0.0;
  std::vector<EnsembleFailure> failures;  // numeric failures / non-convergence
};

/// Solution consumer, invoked in fixed (scenario, path) order after each
/// scenario's parallel solves complete.
using SolutionSink =
    std::function<void(std::size_t scenario, std::size_t path, const GBMPath&,
                       const ReflectedSdeSolution&)>;

EnsembleSummary ensemble_solve(double x0, const SdeCoefficients& coeffs,
                               const ObstacleProvider& obstacles,
                               const std::vector<ScenarioControl>& family, const TimeGrid& grid,
                               std::size_t paths_per_scenario, std::uint64_t base_seed,
                               const PicardOptions& options = {}, double moment_exponent = 2.0,
                               const SolutionSink& sink = nullptr);

/// Fixed-pair convenience overload.
EnsembleSummary ensemble_solve(double x0, const SdeCoefficients& coeffs,
                               const ConstraintPair& constraints,
                               const std::vector<ScenarioControl>& family, const TimeGrid& grid,
                               std::size_t paths_per_scenario, std::uint64_t base_seed,
                               const PicardOptions& options = {}, double moment_exponent = 2.0,
                               const SolutionSink& sink = nullptr);

}  // namespace gskor

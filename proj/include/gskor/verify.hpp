#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gskor/gexp.hpp"
#include "gskor/gsde.hpp"

namespace gskor::verify {

/// Outcome of one randomized property campaign. `worst_slack` is the most
/// positive violation margin seen (a trial passes iff its slack <= 0);
/// `witness` records the inputs of the worst trial so it can be replayed
/// from its seed.
struct PropertyReport {
  std::string property_id;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_slack = 0.0;
  nlohmann::json witness;
  bool passed() const noexcept { return failures == 0; }
};

nlohmann::json to_json(const PropertyReport& report);

/// Accumulated solution-quality checks over reflected SDE solves:
/// obstacle containment within 1e-9, flat-off residuals <= 1e-8, equation
/// residual <= 1e-8, Picard convergence within the iteration budget with
/// nonincreasing distances after the first step.
struct WellFormedness {
  std::size_t paths = 0;
  std::size_t violations = 0;
  double worst_containment = 0.0;
  double worst_flat_off = 0.0;
  double worst_equation = 0.0;
  std::size_t worst_iterations = 0;
  std::size_t non_monotone_runs = 0;
  std::size_t non_converged = 0;
};

void record_well_formedness(WellFormedness& wf, const ReflectedSdeSolution& solution,
                            const ConstraintPair& constraints);

/// sup|k1 - k2| <= sup|s1 - s2| + sup(|upper1 - upper2| \/ |lower1 - lower2|),
/// asserted with 1e-12 slack on randomized inputs and obstacle pairs.
PropertyReport check_stability(std::size_t trials, std::uint64_t seed);

/// Tighter constraints carry larger constraining processes: with
/// lower1 <= lower2 and upper1 >= upper2, k_r^2 >= k_r^1 and k_l^2 >= k_l^1.
PropertyReport check_constraint_monotonicity(std::size_t trials, std::uint64_t seed);

/// With s1 = s2 + nu (nu nondecreasing, nu_0 = 0) and starting constants
/// c1, c2, the sandwich chains
///   k_r^1 - (c2-c1)^+ <= k_r^2 <= k_r^1 + nu + (c1-c2)^+
///   k_l^2 - (c2-c1)^+ <= k_l^1 <= k_l^2 + nu + (c1-c2)^+
/// hold node-wise.
PropertyReport check_input_monotonicity(std::size_t trials, std::uint64_t seed);

/// Reflected SDE comparison: x1 <= x2, f1 <= f2, h1 <= h2, common
/// state-independent diffusion, obstacles ordered upward => X^1 <= X^2.
/// Runs `paths` driver paths for each of five hypothesis-satisfying
/// parameter pairs on a shared driver.
PropertyReport check_comparison(std::size_t paths, std::uint64_t seed,
                                WellFormedness* wf = nullptr);

/// Monotonicity of the individual constraining processes for reflected
/// SDEs sharing one constraint pair, with nondecreasing ordered drifts:
///   A_l^1 <= A_l^2 <= A_l^1 + Xhat + (x2-x1)
///   A_r^2 <= A_r^1 <= A_r^2 + Xhat + (x2-x1)
/// where Xhat accumulates the drift differences along the two solutions.
PropertyReport check_sde_constraining_monotonicity(std::size_t paths, std::uint64_t seed,
                                                   WellFormedness* wf = nullptr);

/// The discretized envelope gamma^n evaluated at every fine node, built
/// from the n-node subsampling of (alpha, beta); stride = fine steps / n.
SampledPath coarse_gamma_on_fine(const SampledPath& alpha, const SampledPath& beta,
                                 std::size_t stride);

/// Discretized envelope gamma^n against the fine-grid gamma on Brownian
/// inputs over the doubling ladder n in {2^4..2^12}: sup|gamma - gamma^n|
/// nonincreasing at every rung and below a path-modulus bound.
PropertyReport check_gamma_convergence(std::size_t trials, std::uint64_t seed);

/// Numerical residual of the pathwise change-of-variable identity on
/// reflected solutions for Phi(x) = x^2 and x^3 over n in {2^8..2^13}:
/// the path-averaged residual shrinks by a factor <= 0.75 per doubling,
/// measured over the whole ladder. Phi(x) = x telescopes exactly.
PropertyReport check_ito_residual(std::size_t paths, std::uint64_t seed,
                                  WellFormedness* wf = nullptr);

struct GMomentsConfig {
  VolatilityBounds bounds{0.25, 1.0};
  double horizon = 1.0;
  std::size_t steps = 256;
  std::size_t family_size = 5;
  std::size_t paths = 100000;
  std::uint64_t seed = 7;
};

/// Moment identities of the driver under the constant-scenario family:
/// E_hat[B_T^2] ~ sigma2_max*T, -E_hat[-B_T^2] ~ sigma2_min*T,
/// E_hat[B_T^+] ~ sigma_max*sqrt(T/2pi), E_hat[B_T] ~ 0, each within
/// three standard errors of the maximizing scenario.
PropertyReport check_g_moments(const GMomentsConfig& config);

/// Well-formedness campaign over a mixed-band ensemble (criterion-sized
/// driver for the solution-quality invariants).
PropertyReport check_reflected_well_formedness(std::size_t paths, std::uint64_t seed,
                                               WellFormedness* wf = nullptr);

}  // namespace gskor::verify

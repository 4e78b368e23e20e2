#pragma once

#include <utility>

#include "gskor/constraints.hpp"
#include "gskor/path.hpp"

namespace gskor {

/// Solution of the two-sided Skorokhod problem for input s: reflected path
/// x = s + k, regulator k, and its decomposition k = k_r - k_l into the
/// nondecreasing constraining processes. k_r pushes the state up off the
/// lower obstacle, k_l pulls it down off the upper one; both start from
/// zero before time 0, so a time-zero jump lands in node 0 of one of them.
struct SkorokhodSolution {
  SampledPath x;
  SampledPath k;
  MonotonePath k_r;
  MonotonePath k_l;
  double flat_off_lower = 0.0;  // integral |r(t, x_t)| dk_r
  double flat_off_upper = 0.0;  // integral |l(t, x_t)| dk_l
  // Set when max|delta s| exceeds half the separation gap: a single step
  // can then cross the band and the Jordan decomposition of k need not be
  // the minimal one.
  bool step_exceeds_half_gap = false;
};

/// Solves via the explicit representation
///   k_t = min( [-phi_0^-] \/ sup_{r<=t} psi_r,
///              inf_{s<=t} [ phi_s \/ sup_{r in [s,t]} psi_r ] )
/// with phi = upper_obstacle - s and psi = lower_obstacle - s, evaluated
/// node-wise through the path envelopes. The regulator splits into k_r/k_l
/// by the Jordan decomposition of its increments.
SkorokhodSolution solve(const SampledPath& s, const ConstraintPair& constraints);

/// Independent per-step projection recursion:
///   x_0 = clamp(s_0), y_i = x_{i-1} + (s_i - s_{i-1}), x_i = clamp(y_i),
/// with overshoots booked into k_r/k_l. Used as the oracle for solve().
SkorokhodSolution solve_oracle(const SampledPath& s, const ConstraintPair& constraints);

/// One-sided defect measures (integral |r(t,x)| dk_r, integral |l(t,x)| dk_l).
/// Regulator increments are atoms sitting at their node, so the integrand is
/// evaluated at the node the increment lands on; that is where the
/// right-continuous state has already been projected onto the obstacle.
std::pair<double, double> flat_off_residuals(const SkorokhodSolution& sol,
                                             const ConstraintPair& constraints);

}  // namespace gskor

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gskor/path.hpp"

namespace gskor {

/// Time-dependent scalar constraint c(t, x), strictly increasing in x at
/// every grid node. `inverse_at_zero`, when set, gives the root of
/// c(t, .) = 0 in closed form; otherwise bisection is used with initial
/// bracket half-width `bracket_halfwidth` (doubled up to 2^20 times) and
/// residual tolerance `inverse_tolerance`.
struct ConstraintFunction {
  std::function<double(double t, double x)> value;
  std::function<double(double t)> inverse_at_zero;  // optional closed form
  double bracket_halfwidth = 10.0;
  double inverse_tolerance = 1e-12;
};

/// Path of roots x_i with |c(t_i, x_i)| <= inverse_tolerance at each node.
SampledPath inverse_at_zero(const ConstraintFunction& c, const TimeGrid& grid);

/// Obstacle magnitude used to realise a one-sided problem inside the
/// two-sided machinery.
inline constexpr double kOneSidedSentinel = 1e30;

/// Constraint pair (r, l): lower pusher r requiring r(t, X_t) >= 0 and
/// upper puller l requiring l(t, X_t) <= 0, together with the cached
/// inverse-at-zero obstacle paths. The solver consumes only the obstacle
/// paths; the functions themselves are re-evaluated only by flat-off
/// residual checks. Immutable after construction, safe to share.
class ConstraintPair {
 public:
  /// r(t,x) = x - alpha_t, l(t,x) = x - beta_t. Obstacles cached exactly.
  static ConstraintPair band(const SampledPath& alpha, const SampledPath& beta);
  static ConstraintPair band(const TimeGrid& grid, double alpha, double beta);

  /// r(t,x) = rho(x) - alpha_t, l(t,x) = rho(x) - beta_t with
  /// rho(x) = sign(x) sqrt|x|; obstacles are rho^{-1} = sign(x) x^2.
  static ConstraintPair rho(const SampledPath& alpha, const SampledPath& beta);

  /// Arbitrary strictly increasing pair; obstacles resolved through
  /// inverse_at_zero. Strict increase is spot-checked on 64 sampled
  /// (t, x < y) probes; a universally quantified check is not possible.
  static ConstraintPair custom(ConstraintFunction lower, ConstraintFunction upper,
                               const TimeGrid& grid);

  /// Band on explicit obstacle paths (also used for sentinel one-sided
  /// reflection and per-scenario simulated obstacles).
  static ConstraintPair from_obstacles(SampledPath lower, SampledPath upper);

  /// One-sided lower reflection: upper obstacle at +kOneSidedSentinel.
  static ConstraintPair one_sided_lower(const SampledPath& alpha);

  const TimeGrid& grid() const noexcept { return lower_obstacle_.grid(); }
  const SampledPath& lower_obstacle() const noexcept { return lower_obstacle_; }
  const SampledPath& upper_obstacle() const noexcept { return upper_obstacle_; }
  double separation_gap() const noexcept { return gap_; }

  /// r(t, x) and l(t, x).
  double lower_value(double t, double x) const { return lower_.value(t, x); }
  double upper_value(double t, double x) const { return upper_.value(t, x); }

 private:
  ConstraintPair(ConstraintFunction lower, ConstraintFunction upper, SampledPath lower_obstacle,
                 SampledPath upper_obstacle);

  ConstraintFunction lower_;
  ConstraintFunction upper_;
  SampledPath lower_obstacle_;
  SampledPath upper_obstacle_;
  double gap_;
};

/// Returns the separation gap min_i(upper_i - lower_i); throws
/// SeparationError when it is not strictly positive.
double validate_separation(const SampledPath& lower_obstacle, const SampledPath& upper_obstacle);
double validate_separation(const ConstraintPair& pair);

/// Built-in evaluators addressable by string id from constraint specs.
/// "cubic": c(t,x) = x^3 + x - obstacle-shift path value at t.
ConstraintFunction builtin_constraint(const std::string& id, const SampledPath& shift);

}  // namespace gskor

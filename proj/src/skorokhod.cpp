#include "gskor/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gskor {
namespace {

double max_step(const SampledPath& s) {
  double m = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) m = std::max(m, std::abs(s[i] - s[i - 1]));
  return m;
}

// positive part, normalizing -0.0 away
double pos(double x) { return x > 0.0 ? x : 0.0; }

/// Jordan decomposition of k's increments; k_0 itself is the time-zero jump.
void decompose(const SampledPath& k, std::vector<double>& up, std::vector<double>& down) {
  const std::size_t n = k.size();
  up.assign(n, 0.0);
  down.assign(n, 0.0);
  up[0] = pos(k[0]);
  down[0] = pos(-k[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double dk = k[i] - k[i - 1];
    up[i] = up[i - 1] + pos(dk);
    down[i] = down[i - 1] + pos(-dk);
  }
}

SkorokhodSolution assemble(const SampledPath& s, const ConstraintPair& constraints,
                           SampledPath x, SampledPath k, std::vector<double> up,
                           std::vector<double> down) {
  SkorokhodSolution sol{std::move(x),
                        std::move(k),
                        MonotonePath(SampledPath(s.grid(), std::move(up))),
                        MonotonePath(SampledPath(s.grid(), std::move(down))),
                        0.0,
                        0.0,
                        max_step(s) > 0.5 * constraints.separation_gap()};
  const auto residuals = flat_off_residuals(sol, constraints);
  sol.flat_off_lower = residuals.first;
  sol.flat_off_upper = residuals.second;
  return sol;
}

}  // namespace

SkorokhodSolution solve(const SampledPath& s, const ConstraintPair& constraints) {
  require_same_grid(s.grid(), constraints.grid());
  const std::size_t n = s.size();

  std::vector<double> phi(n), psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = constraints.upper_obstacle()[i] - s[i];
    psi[i] = constraints.lower_obstacle()[i] - s[i];
  }
  const SampledPath phi_path(s.grid(), std::move(phi));
  const SampledPath psi_path(s.grid(), std::move(psi));

  const SampledPath psi_sup = running_sup(psi_path);
  const SampledPath dual = dual_envelope(phi_path, psi_path);
  const double start_cap = std::min(phi_path[0], 0.0);  // [-phi_0^-]

  std::vector<double> k(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = std::min(std::max(start_cap, psi_sup[i]), dual[i]);
    x[i] = s[i] + k[i];
  }

  SampledPath k_path(s.grid(), std::move(k));
  std::vector<double> up, down;
  decompose(k_path, up, down);
  return assemble(s, constraints, SampledPath(s.grid(), std::move(x)), std::move(k_path),
                  std::move(up), std::move(down));
}

SkorokhodSolution solve_oracle(const SampledPath& s, const ConstraintPair& constraints) {
  require_same_grid(s.grid(), constraints.grid());
  const SampledPath& lower = constraints.lower_obstacle();
  const SampledPath& upper = constraints.upper_obstacle();
  const std::size_t n = s.size();

  // x is re-derived as s + k so the reported triple satisfies the additive
  // identity bitwise; the clamped value and s + (clamped - s) differ by at
  // most one rounding.
  std::vector<double> x(n), k(n), up(n), down(n);
  k[0] = std::clamp(s[0], lower[0], upper[0]) - s[0];
  x[0] = s[0] + k[0];
  up[0] = pos(lower[0] - s[0]);
  down[0] = pos(s[0] - upper[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double y = x[i - 1] + (s[i] - s[i - 1]);
    k[i] = std::clamp(y, lower[i], upper[i]) - s[i];
    x[i] = s[i] + k[i];
    up[i] = up[i - 1] + pos(lower[i] - y);
    down[i] = down[i - 1] + pos(y - upper[i]);
  }

  return assemble(s, constraints, SampledPath(s.grid(), std::move(x)),
                  SampledPath(s.grid(), std::move(k)), std::move(up), std::move(down));
}

std::pair<double, double> flat_off_residuals(const SkorokhodSolution& sol,
                                             const ConstraintPair& constraints) {
  const TimeGrid& grid = sol.x.grid();
  double lower_residual = 0.0;
  double upper_residual = 0.0;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const double d_up = sol.k_r[i] - (i == 0 ? 0.0 : sol.k_r[i - 1]);
    const double d_down = sol.k_l[i] - (i == 0 ? 0.0 : sol.k_l[i - 1]);
    const double t = grid.node(i);
    if (d_up > 0.0) lower_residual += std::abs(constraints.lower_value(t, sol.x[i])) * d_up;
    if (d_down > 0.0) upper_residual += std::abs(constraints.upper_value(t, sol.x[i])) * d_down;
  }
  return {lower_residual, upper_residual};
}

}  // namespace gskor

#include "gskor/constraints.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "gskor/rng.hpp"

namespace gskor {
namespace {

double rho_forward(double x) { return x >= 0.0 ? std::sqrt(x) : -std::sqrt(-x); }
double rho_inverse(double x) { return x >= 0.0 ? x * x : -(x * x); }

std::size_t node_index(const TimeGrid& grid, double t) {
  const double pos = t / grid.dt();
  auto i = static_cast<long long>(std::llround(pos));
  if (i < 0) i = 0;
  if (i > static_cast<long long>(grid.steps())) i = static_cast<long long>(grid.steps());
  return static_cast<std::size_t>(i);
}

/// Evaluator backed by a sampled shift path: c(t, x) = base(x) - shift_t.
/// When base_inverse is supplied the obstacle path has a closed form.
ConstraintFunction shifted(std::function<double(double)> base, SampledPath shift,
                           std::function<double(double)> base_inverse) {
  ConstraintFunction c;
  auto shift_ptr = std::make_shared<SampledPath>(std::move(shift));
  c.value = [base, shift_ptr](double t, double x) {
    return base(x) - (*shift_ptr)[node_index(shift_ptr->grid(), t)];
  };
  if (base_inverse) {
    c.inverse_at_zero = [base_inverse, shift_ptr](double t) {
      return base_inverse((*shift_ptr)[node_index(shift_ptr->grid(), t)]);
    };
  }
  return c;
}

double bisect_root(const ConstraintFunction& c, double t, double center, std::size_t node) {
  const double tol = c.inverse_tolerance;
  double width = c.bracket_halfwidth;
  const double cap = std::ldexp(c.bracket_halfwidth, 20);
  double lo = center - width;
  double hi = center + width;
  while (!(c.value(t, lo) <= 0.0 && c.value(t, hi) >= 0.0)) {
    width *= 2.0;
    if (width > cap)
      throw RootNotFoundError("inverse_at_zero: bracket expansion exhausted at node " +
                                  std::to_string(node) + " (t=" + std::to_string(t) + ")",
                              node);
    lo = center - width;
    hi = center + width;
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double v = c.value(t, mid);
    if (std::abs(v) <= tol) return mid;
    if (v > 0.0)
      hi = mid;
    else
      lo = mid;
    const double next = 0.5 * (lo + hi);
    if (next == mid || next <= lo || next >= hi) break;
    mid = next;
  }
  if (std::abs(c.value(t, mid)) <= tol) return mid;
  throw RootNotFoundError("inverse_at_zero: residual above tolerance at node " +
                              std::to_string(node) + " (t=" + std::to_string(t) + ")",
                          node);
}

void spot_check_strict_increase(const ConstraintFunction& c, const TimeGrid& grid,
                                const char* name) {
  rng::SplitMix gen(0x5eedc0de);
  for (int probe = 0; probe < 64; ++probe) {
    const double t = grid.node(gen.index(grid.nodes()));
    const double x = gen.uniform(-8.0, 8.0);
    const double y = x + gen.uniform(1e-3, 4.0);
    if (!(c.value(t, x) < c.value(t, y)))
      throw std::invalid_argument(std::string(name) +
                                  " constraint is not strictly increasing in x (t=" +
                                  std::to_string(t) + ", x=" + std::to_string(x) + ")");
  }
}

}  // namespace

SampledPath inverse_at_zero(const ConstraintFunction& c, const TimeGrid& grid) {
  if (!c.value) throw std::invalid_argument("inverse_at_zero: missing evaluator");
  std::vector<double> roots(grid.nodes());
  if (c.inverse_at_zero) {
    for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = c.inverse_at_zero(grid.node(i));
  } else {
    double center = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      roots[i] = bisect_root(c, grid.node(i), center, i);
      center = roots[i];
    }
  }
  return SampledPath(grid, std::move(roots));
}

double validate_separation(const SampledPath& lower_obstacle, const SampledPath& upper_obstacle) {
  require_same_grid(lower_obstacle.grid(), upper_obstacle.grid());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lower_obstacle.size(); ++i)
    gap = std::min(gap, upper_obstacle[i] - lower_obstacle[i]);
  if (!(gap > 0.0))
    throw SeparationError("constraint obstacles are not separated (gap=" + std::to_string(gap) +
                              ")",
                          gap);
  return gap;
}

double validate_separation(const ConstraintPair& pair) {
  return validate_separation(pair.lower_obstacle(), pair.upper_obstacle());
}

ConstraintPair::ConstraintPair(ConstraintFunction lower, ConstraintFunction upper,
                               SampledPath lower_obstacle, SampledPath upper_obstacle)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      lower_obstacle_(std::move(lower_obstacle)),
      upper_obstacle_(std::move(upper_obstacle)),
      gap_(validate_separation(lower_obstacle_, upper_obstacle_)) {}

ConstraintPair ConstraintPair::band(const SampledPath& alpha, const SampledPath& beta) {
  require_same_grid(alpha.grid(), beta.grid());
  auto identity = [](double x) { return x; };
  return ConstraintPair(shifted(identity, alpha, identity), shifted(identity, beta, identity),
                        alpha, beta);
}

ConstraintPair ConstraintPair::band(const TimeGrid& grid, double alpha, double beta) {
  return band(SampledPath::constant(grid, alpha), SampledPath::constant(grid, beta));
}

ConstraintPair ConstraintPair::rho(const SampledPath& alpha, const SampledPath& beta) {
  require_same_grid(alpha.grid(), beta.grid());
  std::vector<double> lower(alpha.size()), upper(beta.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    lower[i] = rho_inverse(alpha[i]);
    upper[i] = rho_inverse(beta[i]);
  }
  return ConstraintPair(shifted(rho_forward, alpha, rho_inverse),
                        shifted(rho_forward, beta, rho_inverse),
                        SampledPath(alpha.grid(), std::move(lower)),
                        SampledPath(beta.grid(), std::move(upper)));
}

ConstraintPair ConstraintPair::custom(ConstraintFunction lower, ConstraintFunction upper,
                                      const TimeGrid& grid) {
  spot_check_strict_increase(lower, grid, "lower");
  spot_check_strict_increase(upper, grid, "upper");
  SampledPath lower_obstacle = inverse_at_zero(lower, grid);
  SampledPath upper_obstacle = inverse_at_zero(upper, grid);
  return ConstraintPair(std::move(lower), std::move(upper), std::move(lower_obstacle),
                        std::move(upper_obstacle));
}

ConstraintPair ConstraintPair::from_obstacles(SampledPath lower, SampledPath upper) {
  require_same_grid(lower.grid(), upper.grid());
  auto identity = [](double x) { return x; };
  ConstraintFunction r = shifted(identity, lower, identity);
  ConstraintFunction l = shifted(identity, upper, identity);
  return ConstraintPair(std::move(r), std::move(l), std::move(lower), std::move(upper));
}

ConstraintPair ConstraintPair::one_sided_lower(const SampledPath& alpha) {
  return from_obstacles(alpha, SampledPath::constant(alpha.grid(), kOneSidedSentinel));
}

ConstraintFunction builtin_constraint(const std::string& id, const SampledPath& shift) {
  if (id == "cubic") {
    // No closed-form inverse on purpose: exercises the bisection fallback.
    return shifted([](double x) { return x * x * x + x; }, shift, nullptr);
  }
  throw std::invalid_argument("unknown constraint evaluator id: " + id);
}

}  // namespace gskor

#include "gskor/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gskor {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("TimeGrid: horizon must be finite and > 0");
  if (steps < 1) throw std::invalid_argument("TimeGrid: step count must be >= 1");
}

TimeGrid make_grid(double horizon, std::size_t steps) { return TimeGrid(horizon, steps); }

SampledPath::SampledPath(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nodes())
    throw std::invalid_argument("SampledPath: expected " + std::to_string(grid_.nodes()) +
                                " values, got " + std::to_string(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw NumericError("SampledPath: non-finite value at node " + std::to_string(i) +
                         " (t=" + std::to_string(grid_.node(i)) + ")");
  }
}

SampledPath SampledPath::constant(const TimeGrid& grid, double value) {
  return SampledPath(grid, std::vector<double>(grid.nodes(), value));
}

MonotonePath::MonotonePath(SampledPath path) : path_(std::move(path)) {
  for (std::size_t i = 1; i < path_.size(); ++i) {
    if (path_[i] < path_[i - 1])
      throw std::invalid_argument("MonotonePath: decreases at node " + std::to_string(i));
  }
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b) {
  if (!(a == b)) throw GridMismatchError("paths live on different grids");
}

SampledPath running_sup(const SampledPath& p) {
  std::vector<double> out(p.size());
  double m = p[0];
  for (std::size_t i = 0; i < p.size(); ++i) {
    m = std::max(m, p[i]);
    out[i] = m;
  }
  return SampledPath(p.grid(), std::move(out));
}

SampledPath running_inf(const SampledPath& p) {
  std::vector<double> out(p.size());
  double m = p[0];
  for (std::size_t i = 0; i < p.size(); ++i) {
    m = std::min(m, p[i]);
    out[i] = m;
  }
  return SampledPath(p.grid(), std::move(out));
}

SampledPath gamma_envelope(const SampledPath& a, const SampledPath& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> out(a.size());
  double g = std::min(a[0], b[0]);
  out[0] = g;
  for (std::size_t i = 1; i < a.size(); ++i) {
    g = std::min(std::max(g, a[i]), b[i]);
    out[i] = g;
  }
  return SampledPath(a.grid(), std::move(out));
}

SampledPath dual_envelope(const SampledPath& phi, const SampledPath& psi) {
  require_same_grid(phi.grid(), psi.grid());
  std::vector<double> out(phi.size());
  double e = std::max(phi[0], psi[0]);
  out[0] = e;
  for (std::size_t i = 1; i < phi.size(); ++i) {
    e = std::max(std::min(e, phi[i]), psi[i]);
    out[i] = e;
  }
  return SampledPath(phi.grid(), std::move(out));
}

SampledPath gamma_envelope_direct(const SampledPath& a, const SampledPath& b) {
  require_same_grid(a.grid(), b.grid());
  const std::size_t n = a.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= t; ++s) {
      double inner = std::numeric_limits<double>::infinity();
      for (std::size_t r = s; r <= t; ++r) inner = std::min(inner, b[r]);
      best = std::max(best, std::min(a[s], inner));
    }
    out[t] = best;
  }
  return SampledPath(a.grid(), std::move(out));
}

SampledPath dual_envelope_direct(const SampledPath& phi, const SampledPath& psi) {
  require_same_grid(phi.grid(), psi.grid());
  const std::size_t n = phi.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= t; ++s) {
      double inner = -std::numeric_limits<double>::infinity();
      for (std::size_t r = s; r <= t; ++r) inner = std::max(inner, psi[r]);
      best = std::min(best, std::max(phi[s], inner));
    }
    out[t] = best;
  }
  return SampledPath(phi.grid(), std::move(out));
}

double stieltjes_integral(const SampledPath& x, const MonotonePath& k) {
  return stieltjes_integral(x, k.path());
}

double stieltjes_integral(const SampledPath& x, const SampledPath& k) {
  require_same_grid(x.grid(), k.grid());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += x[i] * (k[i + 1] - k[i]);
  return sum;
}

double sup_distance(const SampledPath& p, const SampledPath& q) {
  require_same_grid(p.grid(), q.grid());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - q[i]));
  return d;
}

}  // namespace gskor

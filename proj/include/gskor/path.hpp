#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gskor/errors.hpp"

namespace gskor {

/// Uniform partition of [0, T]: nodes t_i = i*T/n for i = 0..n.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t nodes() const noexcept { return steps_ + 1; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double node(std::size_t i) const noexcept {
    return horizon_ * static_cast<double>(i) / static_cast<double>(steps_);
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) noexcept = default;

 private:
  double horizon_;
  std::size_t steps_;
};

TimeGrid make_grid(double horizon, std::size_t steps);

/// Real-valued function sampled at every node of a TimeGrid. Immutable;
/// all values finite. Sup/inf over a time interval always means the max/min
/// over the grid nodes it contains (paths are piecewise constant in index).
class SampledPath {
 public:
  SampledPath(TimeGrid grid, std::vector<double> values);

  static SampledPath constant(const TimeGrid& grid, double value);
  static SampledPath zero(const TimeGrid& grid) { return constant(grid, 0.0); }

  template <typename F>
  static SampledPath sample(const TimeGrid& grid, F&& f) {
    std::vector<double> values(grid.nodes());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(grid.node(i));
    return SampledPath(grid, std::move(values));
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// A SampledPath certified nondecreasing (exact at grid nodes).
class MonotonePath {
 public:
  explicit MonotonePath(SampledPath path);

  const SampledPath& path() const noexcept { return path_; }
  const TimeGrid& grid() const noexcept { return path_.grid(); }
  std::size_t size() const noexcept { return path_.size(); }
  double operator[](std::size_t i) const noexcept { return path_[i]; }

 private:
  SampledPath path_;
};

void require_same_grid(const TimeGrid& a, const TimeGrid& b);

/// Node i holds max (resp. min) of values 0..i.
SampledPath running_sup(const SampledPath& p);
SampledPath running_inf(const SampledPath& p);

/// gamma_t = sup_{s in [0,t]} [ a_s /\ inf_{r in [s,t]} b_r ], node-wise.
/// Incremental form: g_i = min(max(g_{i-1}, a_i), b_i); the max/min only
/// select argument values, so every output is bitwise one of the inputs.
SampledPath gamma_envelope(const SampledPath& a, const SampledPath& b);

/// inf_{s in [0,t]} [ phi_s \/ sup_{r in [s,t]} psi_r ], node-wise.
/// Incremental form: e_i = max(min(e_{i-1}, phi_i), psi_i). Amortized O(1)
/// per node; the incremental candidate set prunes to a single survivor
/// because max(. , psi_i) is applied uniformly to every standing candidate.
SampledPath dual_envelope(const SampledPath& phi, const SampledPath& psi);

/// Definition-direct O(n^2) evaluations, retained as oracles for the
/// incremental envelopes.
SampledPath gamma_envelope_direct(const SampledPath& a, const SampledPath& b);
SampledPath dual_envelope_direct(const SampledPath& phi, const SampledPath& psi);

/// Left-endpoint Riemann-Stieltjes sum: sum_i x_{t_i} (k_{t_{i+1}} - k_{t_i}).
double stieltjes_integral(const SampledPath& x, const MonotonePath& k);
/// Same rule against any bounded-variation sampled integrator.
double stieltjes_integral(const SampledPath& x, const SampledPath& k);

/// max_i |p_i - q_i|.
double sup_distance(const SampledPath& p, const SampledPath& q);

}  // namespace gskor

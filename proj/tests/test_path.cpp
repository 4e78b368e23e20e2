#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gskor/path.hpp"
#include "gskor/rng.hpp"

using namespace gskor;

namespace {

SampledPath random_path(const TimeGrid& grid, rng::SplitMix& gen, double scale = 1.0) {
  std::vector<double> v(grid.nodes());
  for (double& x : v) x = scale * gen.normal();
  return SampledPath(grid, std::move(v));
}

}  // namespace

TEST_CASE("make_grid produces the uniform partition") {
  const TimeGrid g = make_grid(1.0, 4);
  CHECK(g.nodes() == 5);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(1) == 0.25);
  CHECK(g.node(2) == 0.5);
  CHECK(g.node(3) == 0.75);
  CHECK(g.node(4) == 1.0);
  CHECK(g.dt() == 0.25);

  const TimeGrid two = make_grid(2.0, 1);
  CHECK(two.node(0) == 0.0);
  CHECK(two.node(1) == 2.0);

  CHECK_THROWS_AS(make_grid(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-1.0, 4), std::invalid_argument);
}

TEST_CASE("SampledPath validates shape and finiteness") {
  const TimeGrid g(1.0, 2);
  CHECK_THROWS_AS(SampledPath(g, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledPath(g, {0.0, std::nan(""), 1.0}), NumericError);
  const SampledPath p(g, {0.0, 2.0, 1.0});
  CHECK(p.size() == 3);
  CHECK(p[1] == 2.0);
}

TEST_CASE("MonotonePath rejects decreases") {
  const TimeGrid g(1.0, 2);
  CHECK_THROWS_AS(MonotonePath(SampledPath(g, {0.0, 1.0, 0.5})), std::invalid_argument);
  const MonotonePath m(SampledPath(g, {0.0, 0.0, 1.0}));
  CHECK(m[2] == 1.0);
}

TEST_CASE("running envelopes") {
  const TimeGrid g(1.0, 2);
  const SampledPath p(g, {0.0, 2.0, 1.0});
  const SampledPath q(g, {3.0, 1.0, 2.0});
  CHECK(running_sup(p)[0] == 0.0);
  CHECK(running_sup(p)[1] == 2.0);
  CHECK(running_sup(p)[2] == 2.0);
  CHECK(running_inf(q)[0] == 3.0);
  CHECK(running_inf(q)[1] == 1.0);
  CHECK(running_inf(q)[2] == 1.0);

  const SampledPath c = SampledPath::constant(g, 4.5);
  CHECK(sup_distance(running_sup(c), c) == 0.0);
  CHECK(sup_distance(running_inf(c), c) == 0.0);

  rng::SplitMix gen(11);
  const SampledPath r = random_path(TimeGrid(1.0, 100), gen);
  const SampledPath hi = running_sup(r);
  const SampledPath lo = running_inf(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(hi[i] >= r[i]);
    CHECK(lo[i] <= r[i]);
  }
}

TEST_CASE("gamma envelope matches its definition") {
  const TimeGrid g(1.0, 64);
  // a_s = s against constant b = 1: a <= b everywhere so gamma is the
  // running sup of a.
  const SampledPath a = SampledPath::sample(g, [](double t) { return t; });
  const SampledPath ones = SampledPath::constant(g, 1.0);
  const SampledPath gamma = gamma_envelope(a, ones);
  for (std::size_t i = 0; i < gamma.size(); ++i) CHECK(gamma[i] == doctest::Approx(g.node(i)));

  // the min dominates when a is everywhere above b
  const SampledPath twos = SampledPath::constant(g, 2.0);
  CHECK(sup_distance(gamma_envelope(twos, ones), ones) == 0.0);

  rng::SplitMix gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeGrid gr(1.0, 64);
    const SampledPath x = random_path(gr, gen);
    const SampledPath y = random_path(gr, gen);
    CHECK(sup_distance(gamma_envelope(x, y), gamma_envelope_direct(x, y)) <= 1e-12);
  }
}

TEST_CASE("gamma envelope is nondecreasing for nondecreasing a and constant b") {
  rng::SplitMix gen(23);
  const TimeGrid g(1.0, 128);
  std::vector<double> v(g.nodes());
  v[0] = -1.0;
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + std::abs(gen.normal()) * 0.1;
  const SampledPath a(g, std::move(v));
  const SampledPath b = SampledPath::constant(g, 0.7);
  const SampledPath gamma = gamma_envelope(a, b);
  for (std::size_t i = 1; i < gamma.size(); ++i) CHECK(gamma[i] >= gamma[i - 1]);
}

TEST_CASE("dual envelope matches its definition") {
  // psi decreasing makes the inner sup equal psi_s, so the envelope is the
  // running inf of phi.
  const TimeGrid g(1.0, 100);
  const SampledPath phi = SampledPath::sample(g, [](double t) { return 1.0 - 2.0 * t; });
  const SampledPath psi = SampledPath::sample(g, [](double t) { return -1.0 - 2.0 * t; });
  const SampledPath env = dual_envelope(phi, psi);
  for (std::size_t i = 0; i < env.size(); ++i)
    CHECK(env[i] == doctest::Approx(1.0 - 2.0 * g.node(i)));
  CHECK(sup_distance(env, dual_envelope_direct(phi, psi)) <= 1e-12);
  CHECK(sup_distance(env, running_inf(phi)) <= 1e-12);

  const SampledPath ones = SampledPath::constant(g, 1.0);
  const SampledPath minus = SampledPath::constant(g, -1.0);
  CHECK(sup_distance(dual_envelope(ones, minus), ones) == 0.0);

  rng::SplitMix gen(29);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeGrid gr(1.0, 256);
    const SampledPath p = random_path(gr, gen);
    std::vector<double> q(p.values().begin(), p.values().end());
    for (double& x : q) x -= 2.0;  // separated pair psi = phi - 2
    const SampledPath below(gr, std::move(q));
    CHECK(sup_distance(dual_envelope(p, below), dual_envelope_direct(p, below)) <= 1e-12);
    const SampledPath r = random_path(gr, gen);  // unrelated pair as well
    CHECK(sup_distance(dual_envelope(p, r), dual_envelope_direct(p, r)) <= 1e-12);
  }
}

TEST_CASE("envelopes reject mismatched grids") {
  const SampledPath a = SampledPath::zero(TimeGrid(1.0, 4));
  const SampledPath b = SampledPath::zero(TimeGrid(1.0, 5));
  CHECK_THROWS_AS(gamma_envelope(a, b), GridMismatchError);
  CHECK_THROWS_AS(dual_envelope(a, b), GridMismatchError);
  CHECK_THROWS_AS(sup_distance(a, b), GridMismatchError);
  CHECK_THROWS_AS(stieltjes_integral(a, b), GridMismatchError);
}

TEST_CASE("stieltjes integral uses the left-endpoint rule") {
  const TimeGrid g(2.0, 1000);
  const SampledPath ones = SampledPath::constant(g, 1.0);
  const MonotonePath clock(SampledPath::sample(g, [](double t) { return t; }));
  CHECK(stieltjes_integral(ones, clock) == doctest::Approx(2.0).epsilon(1e-12));

  const SampledPath zeros = SampledPath::zero(g);
  CHECK(stieltjes_integral(zeros, clock) == 0.0);

  const TimeGrid unit(1.0, 4096);
  const SampledPath t_path = SampledPath::sample(unit, [](double t) { return t; });
  const double value = stieltjes_integral(t_path, MonotonePath(t_path));
  CHECK(std::abs(value - 0.5) <= unit.dt());
}

TEST_CASE("stieltjes integral is linear and additive in the integrator") {
  rng::SplitMix gen(31);
  const TimeGrid g(1.0, 200);
  const SampledPath x = random_path(g, gen);
  std::vector<double> k1v(g.nodes()), k2v(g.nodes());
  k1v[0] = 0.0;
  k2v[0] = 0.5;
  for (std::size_t i = 1; i < g.nodes(); ++i) {
    k1v[i] = k1v[i - 1] + std::abs(gen.normal()) * 0.05;
    k2v[i] = k2v[i - 1] + std::abs(gen.normal()) * 0.05;
  }
  std::vector<double> sum(g.nodes());
  for (std::size_t i = 0; i < g.nodes(); ++i) sum[i] = k1v[i] + k2v[i];
  const MonotonePath k1(SampledPath(g, std::move(k1v)));
  const MonotonePath k2(SampledPath(g, std::move(k2v)));
  const MonotonePath k12(SampledPath(g, std::move(sum)));

  const double split = stieltjes_integral(x, k1) + stieltjes_integral(x, k2);
  CHECK(stieltjes_integral(x, k12) == doctest::Approx(split).epsilon(1e-12));

  std::vector<double> scaled(x.values().begin(), x.values().end());
  for (double& v : scaled) v *= 3.0;
  const double lhs = stieltjes_integral(SampledPath(g, std::move(scaled)), k1);
  CHECK(lhs == doctest::Approx(3.0 * stieltjes_integral(x, k1)).epsilon(1e-12));
}

TEST_CASE("sup_distance basics") {
  const TimeGrid g(1.0, 1);
  CHECK(sup_distance(SampledPath(g, {0.0, 1.0}), SampledPath(g, {0.0, 1.0})) == 0.0);
  CHECK(sup_distance(SampledPath::zero(g), SampledPath::constant(g, 3.0)) == 3.0);
  CHECK(sup_distance(SampledPath(g, {0.0, 1.0}), SampledPath(g, {0.0, -2.0})) == 3.0);
}

TEST_CASE("envelope outputs are bitwise deterministic") {
  rng::SplitMix gen(37);
  const TimeGrid g(1.0, 512);
  const SampledPath a = random_path(g, gen);
  const SampledPath b = random_path(g, gen);
  const SampledPath e1 = dual_envelope(a, b);
  const SampledPath e2 = dual_envelope(a, b);
  for (std::size_t i = 0; i < e1.size(); ++i) CHECK(e1[i] == e2[i]);
}

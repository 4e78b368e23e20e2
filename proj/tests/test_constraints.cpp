#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gskor/constraints.hpp"

using namespace gskor;

namespace {

double rho(double x) { return x >= 0.0 ? std::sqrt(x) : -std::sqrt(-x); }

}  // namespace

TEST_CASE("inverse_at_zero resolves linear shifts by bisection") {
  const TimeGrid g(1.0, 8);
  ConstraintFunction c;
  c.value = [](double, double x) { return x - 1.0; };
  const SampledPath roots = inverse_at_zero(c, g);
  for (std::size_t i = 0; i < roots.size(); ++i) CHECK(roots[i] == doctest::Approx(1.0));
}

TEST_CASE("inverse_at_zero handles the square-root constraint") {
  // c(t, x) = rho(x) - 2 has the root rho^{-1}(2) = 4.
  const TimeGrid g(1.0, 4);
  ConstraintFunction c;
  c.value = [](double, double x) { return rho(x) - 2.0; };
  const SampledPath roots = inverse_at_zero(c, g);
  for (std::size_t i = 0; i < roots.size(); ++i)
    CHECK(roots[i] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("inverse_at_zero solves the cubic to tolerance") {
  const TimeGrid g(1.0, 4);
  ConstraintFunction c;
  c.value = [](double t, double x) { return x * x * x + x - (t + 1.0); };
  const SampledPath roots = inverse_at_zero(c, g);
  CHECK(roots[0] == doctest::Approx(0.6823278).epsilon(1e-6));
  for (std::size_t i = 0; i < roots.size(); ++i)
    CHECK(std::abs(c.value(g.node(i), roots[i])) <= c.inverse_tolerance);
}

TEST_CASE("inverse_at_zero reports bracket exhaustion with the node") {
  const TimeGrid g(1.0, 3);
  ConstraintFunction c;
  c.value = [](double, double x) { return std::atan(x) - 10.0; };  // no root anywhere
  c.bracket_halfwidth = 1.0;
  try {
    inverse_at_zero(c, g);
    FAIL("expected RootNotFoundError");
  } catch (const RootNotFoundError& e) {
    CHECK(e.node() == 0);
  }
}

TEST_CASE("band pair caches obstacles exactly") {
  const TimeGrid g(1.0, 16);
  const ConstraintPair pair = ConstraintPair::band(g, -1.0, 1.0);
  CHECK(pair.separation_gap() == 2.0);
  CHECK(pair.lower_obstacle()[7] == -1.0);
  CHECK(pair.upper_obstacle()[7] == 1.0);
  CHECK(pair.lower_value(g.node(3), 0.25) == 1.25);
  CHECK(pair.upper_value(g.node(3), 0.25) == -0.75);

  const SampledPath alpha = SampledPath::sample(g, [](double t) { return std::sin(t); });
  const SampledPath beta = SampledPath::sample(g, [](double t) { return std::sin(t) + 0.5; });
  CHECK(ConstraintPair::band(alpha, beta).separation_gap() == doctest::Approx(0.5));

  CHECK_THROWS_AS(ConstraintPair::band(g, 0.0, 0.0), SeparationError);
}

TEST_CASE("rho pair squares the obstacle levels") {
  const TimeGrid g(1.0, 8);
  const ConstraintPair sym = ConstraintPair::rho(SampledPath::constant(g, -1.0),
                                                 SampledPath::constant(g, 1.0));
  const ConstraintPair band = ConstraintPair::band(g, -1.0, 1.0);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    CHECK(sym.lower_obstacle()[i] == band.lower_obstacle()[i]);
    CHECK(sym.upper_obstacle()[i] == band.upper_obstacle()[i]);
  }

  const ConstraintPair up =
      ConstraintPair::rho(SampledPath::constant(g, 1.0), SampledPath::constant(g, 2.0));
  CHECK(up.lower_obstacle()[0] == 1.0);
  CHECK(up.upper_obstacle()[0] == 4.0);

  const ConstraintPair down =
      ConstraintPair::rho(SampledPath::constant(g, -2.0), SampledPath::constant(g, -1.0));
  CHECK(down.lower_obstacle()[0] == -4.0);
  CHECK(down.upper_obstacle()[0] == -1.0);
}

TEST_CASE("validate_separation returns the gap and accepts tiny positive gaps") {
  const TimeGrid g(1.0, 4);
  CHECK(validate_separation(ConstraintPair::band(g, -1.0, 1.0)) == 2.0);
  CHECK(validate_separation(ConstraintPair::band(g, 0.0, 1e-9)) == 1e-9);
  CHECK_THROWS_AS(ConstraintPair::band(g, 1.0, -1.0), SeparationError);
  try {
    ConstraintPair::band(g, 0.0, 0.0);
    FAIL("expected SeparationError");
  } catch (const SeparationError& e) {
    CHECK(e.gap() == 0.0);
  }
}

TEST_CASE("custom pairs spot-check strict increase") {
  const TimeGrid g(1.0, 8);
  ConstraintFunction bad;
  bad.value = [](double, double x) { return -x; };  // decreasing
  ConstraintFunction good;
  good.value = [](double, double x) { return x - 2.0; };
  CHECK_THROWS_AS(ConstraintPair::custom(bad, good, g), std::invalid_argument);
}

TEST_CASE("custom pair via builtin cubic evaluators") {
  const TimeGrid g(1.0, 8);
  const SampledPath alpha = SampledPath::constant(g, -1.0);
  const SampledPath beta = SampledPath::constant(g, 1.0);
  const ConstraintPair pair = ConstraintPair::custom(builtin_constraint("cubic", alpha),
                                                     builtin_constraint("cubic", beta), g);
  // x^3 + x = +-1 at x ~ +-0.6823278
  CHECK(pair.lower_obstacle()[0] == doctest::Approx(-0.6823278).epsilon(1e-6));
  CHECK(pair.upper_obstacle()[0] == doctest::Approx(0.6823278).epsilon(1e-6));
  CHECK_THROWS_AS(builtin_constraint("nope", alpha), std::invalid_argument);
}

TEST_CASE("inversion reverses pointwise order") {
  // c1 <= c2 pointwise implies root(c1) >= root(c2).
  const TimeGrid g(1.0, 16);
  ConstraintFunction c1, c2;
  c1.value = [](double t, double x) { return x * x * x + x - (t + 2.0); };
  c2.value = [](double t, double x) { return x * x * x + x - (t + 1.0); };
  const SampledPath r1 = inverse_at_zero(c1, g);
  const SampledPath r2 = inverse_at_zero(c2, g);
  for (std::size_t i = 0; i < g.nodes(); ++i) CHECK(r1[i] >= r2[i]);
}

TEST_CASE("one-sided pair uses the sentinel upper obstacle") {
  const TimeGrid g(1.0, 4);
  const ConstraintPair pair = ConstraintPair::one_sided_lower(SampledPath::constant(g, 0.0));
  CHECK(pair.upper_obstacle()[2] == kOneSidedSentinel);
  CHECK(pair.lower_obstacle()[2] == 0.0);
}

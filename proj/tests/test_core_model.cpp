#include <doctest.h>

#include <cmath>
#include <random>

#include "satnls/core_model.hpp"
#include "satnls/scalar_ground_state.hpp"

using namespace satnls;

TEST_CASE("saturation_g closed-form values") {
  CHECK(saturation_g(0.0) == 0.0);
  CHECK(saturation_g(1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(saturation_g(-1e-12), std::domain_error);
}

TEST_CASE("saturation_g small-z series against extended precision") {
  for (double z : {1e-8, 1e-6, 5e-5, 2e-4, 1e-3}) {
    const long double zl = z;
    const long double exact = zl - std::log1p(zl);
    CHECK(saturation_g(z) == doctest::Approx(double(exact)).epsilon(1e-6));
  }
  // z = 1e-8 sits deep in the cancellation zone: g ~ z^2/2
  CHECK(saturation_g(1e-8) == doctest::Approx(5e-17).epsilon(1e-6));
}

TEST_CASE("saturation_g is strictly increasing") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    double z1 = dist(rng), z2 = dist(rng);
    if (z1 == z2) continue;
    if (z1 > z2) std::swap(z1, z2);
    CHECK(saturation_g(z1) < saturation_g(z2));
  }
}

TEST_CASE("Params validation and derived windows") {
  Params p{1.0, 0.25, 2.0, 1.0, 0.3, 1};
  p.validate();
  CHECK(p.s_star_u() == doctest::Approx(2.0));
  CHECK(p.s_star_v() == doctest::Approx(4.0));
  Params swapped = p.swapped();
  CHECK(swapped.lambda1 == 0.25);
  CHECK(swapped.alpha == 1.0);
  CHECK(swapped.beta == 2.0);

  Params bad = p;
  bad.lambda1 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = p;
  bad.s = -1e-9;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = p;
  bad.n = 4;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("RadialGrid invariants and decay-margin factory") {
  RadialGrid g{15.0, 4000};
  g.validate();
  CHECK(g.spacing() == doctest::Approx(15.0 / 3999.0));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(3999) == doctest::Approx(15.0));
  CHECK_THROWS_AS((RadialGrid{15.0, 2}.validate()), std::domain_error);
  CHECK_THROWS_AS((RadialGrid{-1.0, 100}.validate()), std::domain_error);

  Params p{1.0, 0.25, 1.0, 1.0, 0.0, 1};
  CHECK(RadialGrid::min_r_max(p) == doctest::Approx(30.0));
  CHECK(RadialGrid::for_params(p, 500).r_max == doctest::Approx(30.0));
}

TEST_CASE("intensity_Z pointwise formula and swap symmetry") {
  RadialGrid grid{10.0, 101};
  Params p{1.0, 1.0, 2.0, 1.0, 0.5, 1};

  StatePair zero = StatePair::zero(grid);
  CHECK(intensity_Z(zero, p).max_abs() == 0.0);

  StatePair st = StatePair::zero(grid);
  st.u.values = (-grid.nodes().square()).exp();
  const RadialProfile z = intensity_Z(st, p);
  CHECK((z.values - 2.0 * st.u.values.square()).abs().maxCoeff() == 0.0);

  StatePair both = StatePair::zero(grid);
  both.u.values = (-grid.nodes().square()).exp();
  both.v.values = (0.5 - 0.1 * grid.nodes()).sin();
  StatePair flipped = StatePair::zero(grid);
  flipped.u = both.v;
  flipped.v = both.u;
  const RadialProfile z1 = intensity_Z(both, p);
  const RadialProfile z2 = intensity_Z(flipped, p.swapped());
  CHECK((z1.values - z2.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("saturation bound Z/(1+sZ) < 1/s") {
  RadialGrid grid{10.0, 401};
  Params p{1.0, 1.0, 1.5, 0.7, 0.8, 1};
  StatePair st = StatePair::zero(grid);
  st.u.values = 3.0 * (-grid.nodes().square()).exp();
  st.v.values = 2.0 * (-0.5 * grid.nodes().square()).exp();
  const Eigen::ArrayXd Z = intensity_Z(st, p).values;
  CHECK(((Z / (1.0 + p.s * Z)) < 1.0 / p.s).all());
}

TEST_CASE("residual of the zero state vanishes") {
  RadialGrid grid{10.0, 201};
  for (int n : {1, 2, 3}) {
    Params p{1.0, 0.5, 1.0, 1.0, 0.4, n};
    const auto [ru, rv] = residual(StatePair::zero(grid), p);
    CHECK(ru.max_abs() == 0.0);
    CHECK(rv.max_abs() == 0.0);
  }
}

TEST_CASE("residual of a constant profile matches the interior formula") {
  RadialGrid grid{10.0, 201};
  Params p{1.2, 0.8, 1.0, 2.0, 0.3, 1};
  const double c = 0.7;
  StatePair st = StatePair::zero(grid);
  st.u.values.setConstant(c);
  const auto [ru, rv] = residual(st, p);
  const double Zc = p.alpha * c * c;
  const double expected = p.lambda1 * c - p.alpha * c * Zc / (1.0 + p.s * Zc);
  // Laplacian of a constant vanishes at every node including r = 0.
  for (Eigen::Index i = 0; i + 1 < grid.num_points; ++i)
    CHECK(ru.values[i] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(ru.values[grid.num_points - 1] == doctest::Approx(c));  // Dirichlet row
}

TEST_CASE("residual of the scalar ground state is small on a fine grid") {
  ScalarProblem prob{1.0, 1.0, 0.5, 1};
  RadialGrid fine{20.0, 30001};
  StatePair st = StatePair::zero(fine);
  st.u = ground_state_1d(prob, fine);
  Params p{1.0, 0.25, 1.0, 1.0, 0.5, 1};
  const auto [ru, rv] = residual(st, p);
  CHECK(ru.max_abs() < 1e-6);
  CHECK(rv.max_abs() == 0.0);
}

TEST_CASE("residual depends only on values and grid geometry") {
  RadialGrid grid{12.0, 301};
  Params p{1.0, 1.0, 1.0, 1.0, 0.25, 2};
  StatePair st = StatePair::zero(grid);
  st.u.values = (-grid.nodes().square()).exp();
  st.v.values = 0.3 * (-0.7 * grid.nodes().square()).exp();
  const auto [ru1, rv1] = residual(st, p);

  RadialGrid copy{12.0, 301};  // rebuilt, not shared
  StatePair st2{RadialProfile(copy, st.u.values), RadialProfile(copy, st.v.values)};
  const auto [ru2, rv2] = residual(st2, p);
  CHECK((ru1.values == ru2.values).all());
  CHECK((rv1.values == rv2.values).all());
}

TEST_CASE("truncation residual shrinks as r_max grows") {
  // For a decaying profile the Dirichlet row is dominated by the tail value.
  ScalarProblem prob{1.0, 1.0, 0.0, 1};
  double previous = 1.0;
  for (double r_max : {10.0, 20.0, 30.0}) {
    RadialGrid grid{r_max, Eigen::Index(r_max * 400) + 1};
    StatePair st = StatePair::zero(grid);
    st.u = ground_state_1d(prob, grid);
    const auto [ru, rv] = residual(st, {1.0, 1.0, 1.0, 1.0, 0.0, 1});
    const double boundary = std::abs(ru.values[grid.num_points - 1]);
    CHECK(boundary < previous);
    previous = boundary;
  }
}

TEST_CASE("StatePair grid sharing is enforced") {
  RadialGrid g1{10.0, 101}, g2{10.0, 102};
  StatePair st{RadialProfile::zero(g1), RadialProfile::zero(g2)};
  CHECK_THROWS_AS(st.require_shared_grid(), std::invalid_argument);
}

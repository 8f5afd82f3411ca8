#include "doctest.h"

#include "rzlab/counterexamples.hpp"

#include <cmath>
#include <numbers>

using namespace rzlab;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("CE1 series") {
  const auto at0 = ce1_series(0.0, 0.25);
  CHECK(at0.v == 1.0);
  CHECK(at0.r_dv == 0.0);
  // m = 1 term dominates near the axis: v - 1 ~ r^eps / eps^2.
  const double r = 1e-16;
  CHECK((ce1_series(r, 0.25).v - 1.0) == doctest::Approx(std::pow(r, 0.25) / 0.0625).epsilon(1e-3));
  // r dv/dr against a centred difference in log r.
  for (double rr : {0.01, 0.3, 1.7}) {
    const double e = 1e-5;
    const double fd = (ce1_series(rr * std::exp(e), 0.25).v - ce1_series(rr * std::exp(-e), 0.25).v) / (2.0 * e);
    CHECK(ce1_series(rr, 0.25).r_dv == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK_THROWS_AS(ce1_series(-1.0, 0.25), std::invalid_argument);
}

TEST_CASE("CE1 derivative near the axis") {
  // d1 v = x1 r_dv / r^2 against a centred difference of the series in x1 at (0.01, 0).
  const double x1 = 0.01, e = 1e-7;
  const double d1v = x1 * ce1_series(x1, 0.25).r_dv / (x1 * x1);
  const double fd = (ce1_series(x1 + e, 0.25).v - ce1_series(x1 - e, 0.25).v) / (2.0 * e);
  CHECK(d1v == doctest::Approx(fd).epsilon(1e-6));
  // The m = 1 term x1 r^{eps-2} / eps takes over as r -> 0.
  CHECK(x1 * std::pow(x1, -1.75) / 0.25 == doctest::Approx(4.0 * std::pow(10.0, 1.5)));
  const double tiny = 1e-16;
  CHECK(ce1_series(tiny, 0.25).r_dv / (std::pow(tiny, 0.25) / 0.25) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("CE1 grid derivative matches a difference of u") {
  const auto data = ce1_build(GridSpec(3, 16, 2.5), 0.25, 4.0);
  auto u = [](const Point& x) {
    return ce1_cutoff(x.norm()).value * ce1_series(std::hypot(x[0], x[1]), 0.25).v;
  };
  for (Eigen::Index i = 0; i < data.grid.size(); i += 97) {
    const Point x = data.grid.point(i);
    if (std::hypot(x[0], x[1]) < 0.1) continue;
    Point a = x, b = x;
    a[0] += 1e-6;
    b[0] -= 1e-6;
    CHECK(data.du1[i] == doctest::Approx((u(a) - u(b)) / 2e-6).epsilon(1e-5));
    CHECK(data.u[i] == doctest::Approx(u(x)));
  }
}

TEST_CASE("cutoff") {
  CHECK(ce1_cutoff(0.5).value == 1.0);
  CHECK(ce1_cutoff(2.5).value == 0.0);
  CHECK(ce1_cutoff(1.5).value == doctest::Approx(0.5));
  for (double rho : {1.0, 2.0}) {
    CHECK(std::abs(ce1_cutoff(rho).d1) < 1e-14);
    CHECK(std::abs(ce1_cutoff(rho).d2) < 1e-14);
  }
  const double h = 1e-6;
  CHECK(ce1_cutoff(1.3).d1 == doctest::Approx((ce1_cutoff(1.3 + h).value - ce1_cutoff(1.3 - h).value) / (2 * h)));
  CHECK(ce1_cutoff(1.3).d2 == doctest::Approx((ce1_cutoff(1.3 + h).d1 - ce1_cutoff(1.3 - h).d1) / (2 * h)));
}

TEST_CASE("CE1 construction invariants") {
  const auto data = ce1_build(GridSpec(3, 32, 2.5), 0.25, 4.0);
  CHECK(data.v.min() >= 1.0);
  CHECK(ce1_harmonic_residual(data) <= 1e-3);
  double outside = 0.0;
  for (Eigen::Index i = 0; i < data.grid.size(); ++i) {
    const double rho = data.grid.point(i).norm();
    if (rho < 1.0 || rho > 2.0) outside = std::max(outside, std::abs(data.g[i]));
  }
  CHECK(outside <= 1e-10);
  CHECK(data.u.max() <= data.v.max());
  CHECK_THROWS_AS(ce1_build(GridSpec(2, 16, 2.5), 0.25, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(ce1_build(GridSpec(3, 8, 2.5), 0.6, 4.0), std::invalid_argument);
}

TEST_CASE("fd4 Laplacian is exact to fourth order on a smooth periodic field") {
  auto err = [](int n) {
    const GridSpec g(2, n, std::numbers::pi);
    const Field f = sample(g, [](const Point& x) { return std::sin(x[0]) * std::cos(2.0 * x[1]); });
    const Field lap = fd4_laplacian(f);
    return (lap.values() + 5.0 * f.values()).cwiseAbs().maxCoeff();
  };
  CHECK(err(16) / err(32) > 14.0);
  CHECK(err(32) < 2e-3);
}

TEST_CASE("CE1 scan slope") {
  const auto rep = divergence_scan(Counterexample::CE1, {0.25, 4.0, 3}, {});
  CHECK(rep.slope == doctest::Approx(-0.25).epsilon(0.2));
  CHECK(std::abs(rep.slope + 0.25) <= 0.05);
  CHECK(rep.monotone);
  CHECK(rep.conclusive);
  // Outside the counterexample regime the profile stays bounded.
  const auto ctrl = divergence_scan(Counterexample::CE1, {0.75, 4.0, 3}, {});
  CHECK(ctrl.slope >= -0.02);
}

TEST_CASE("CE1 quadrature agrees with a grid Riemann sum") {
  const auto data = ce1_build(GridSpec(3, 64, 2.0), 0.25, 4.0);
  const double q = ce1_quadrature_norm(0.25, 4.0, 3, 0.2);
  CHECK(ce1_grid_norm(data, 0.2) == doctest::Approx(q).epsilon(0.1));
}

TEST_CASE("CE2 scan") {
  const auto rep = divergence_scan(Counterexample::CE2, {0.25, 4.0, 3}, {});
  CHECK(rep.r_squared > 0.99);
  CHECK(rep.points.size() == 8);
  // Increments between halvings approach the constant expected_slope * ln 2.
  const double last = rep.points[7].value - rep.points[6].value;
  CHECK(last == doctest::Approx(rep.expected * std::log(2.0)).epsilon(1e-3));
  CHECK(rep.expected == doctest::Approx(2.0 * pi));
}

TEST_CASE("CE3 scan") {
  const auto rep = divergence_scan(Counterexample::CE3, {0.25, 4.0, 3}, {1e3, 1e6, 1e12});
  CHECK(rep.monotone);
  CHECK(rep.max_increment_error <= 0.05);
  CHECK(rep.expected == doctest::Approx(4.0 * pi));
}

TEST_CASE("scan argument validation") {
  CHECK_THROWS_AS(parse_counterexample("CE4"), std::invalid_argument);
  CHECK(parse_counterexample("ce2") == Counterexample::CE2);
  CHECK_THROWS_AS(divergence_scan(Counterexample::CE2, {0.25, 4.0, 3}, {0.1, 0.2, 0.05}), std::invalid_argument);
  CHECK_THROWS_AS(divergence_scan(Counterexample::CE3, {0.25, 4.0, 2}, {}), std::invalid_argument);
}

TEST_CASE("Green-bounded integrals") {
  const Point origin = Point::Zero(3);
  SUBCASE("zero") {
    const auto rep = green_bounded_check(Potential::zero(), 3, {origin}, 1e3);
    CHECK(rep.sup_estimate == 0.0);
    CHECK(rep.tail_bound == 0.0);
  }
  SUBCASE("constant grows without bound") {
    const auto a = green_bounded_check(Potential::constant(1.0), 3, {origin}, 10.0);
    const auto b = green_bounded_check(Potential::constant(1.0), 3, {origin}, 20.0);
    CHECK(std::isinf(a.tail_bound));
    CHECK(a.sup_estimate == doctest::Approx(4.0 * pi * 50.0));
    CHECK(b.sup_estimate / a.sup_estimate == doctest::Approx(4.0));
  }
  SUBCASE("CE3 is finite and stable under cap doubling") {
    const auto a = green_bounded_check(Potential::ce3(), 3, {origin}, 1e3);
    const auto b = green_bounded_check(Potential::ce3(), 3, {origin}, 2e3);
    CHECK(std::isfinite(a.sup_estimate));
    CHECK(b.sup_estimate > a.sup_estimate);
    CHECK(b.sup_estimate - a.sup_estimate <= a.tail_bound);
    CHECK(a.tail_bound == doctest::Approx(4.0 * pi / std::log(1e3)));
  }
  SUBCASE("CE2 at the origin has a closed form") {
    const auto rep = green_bounded_check(Potential::ce2(4.0), 3, {origin}, 2.0);
    CHECK(rep.sup_estimate == doctest::Approx(16.0 * pi / 3.0).epsilon(1e-6));
    CHECK(rep.tail_bound == 0.0);
    // Continuous in x and largest near the centre.
    const auto off = green_bounded_check(Potential::ce2(4.0), 3, {Point::Unit(3, 0) * 1e-3, Point::Constant(3, 0.4)}, 2.0);
    CHECK(off.values[0] == doctest::Approx(rep.sup_estimate).epsilon(1e-2));
    CHECK(off.values[1] < off.values[0]);
  }
  SUBCASE("shell theorem for radial potentials") {
    // Harmonic inside the unit ball: at |x| = 0, int r^2 r^2 r^{-1} dr = 1/4.
    CHECK(green_bounded_radial(Potential::harmonic(), 3, 0.0, 1.0) == doctest::Approx(pi));
    // At |x| = R the shell formula reduces to the Newton potential of the full ball.
    CHECK(green_bounded_radial(Potential::constant(1.0), 3, 1.0, 1.0) == doctest::Approx(4.0 * pi / 3.0));
  }
  CHECK_THROWS_AS(green_bounded_check(Potential::ce3(), 2, {Point::Zero(2)}, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(green_bounded_check(Potential::ce3(), 3, {Point::Constant(3, 10.0)}, 10.0), std::invalid_argument);
}

TEST_CASE("CE2 lower-bound field") {
  const GridSpec g(3, 8, 2.0);
  const Field f = ce2_lower_bound_field(g, 4.0);
  CHECK(f.min() >= 0.0);
  CHECK(f[g.nearest(Point::Constant(3, 1.5))] == 0.0);
}

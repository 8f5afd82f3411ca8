#include "doctest.h"

#include "rzlab/spectral.hpp"
#include "rzlab/semigroup.hpp"

#include <numbers>

using namespace rzlab;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_diff(const Field& a, const Field& b) { return (a.values() - b.values()).cwiseAbs().maxCoeff(); }

Field delta_at_origin(const GridSpec& g) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.size());
  v[g.nearest(Point::Zero(g.dim()))] = 1.0 / g.cell_volume();
  return Field(g, v);
}

}  // namespace

TEST_CASE("symbols match their formulas") {
  const GridSpec g(2, 8, 3.0);
  const Eigen::VectorXd xi2 = squared_frequencies(g);
  const auto heat = multiplier_symbol(g, Multiplier::heat(0.3));
  const auto lap = multiplier_symbol(g, Multiplier::lap());
  const auto isl = multiplier_symbol(g, Multiplier::inv_sqrt_lap());
  const auto sl = multiplier_symbol(g, Multiplier::sqrt_lap());
  const auto il = multiplier_symbol(g, Multiplier::inv_lap());
  CHECK(xi2[0] == 0.0);
  CHECK(isl[0] == 0.0);
  CHECK(il[0] == 0.0);
  for (Eigen::Index i = 1; i < g.size(); ++i) {
    CHECK(heat[i].real() == doctest::Approx(std::exp(-0.3 * xi2[i])));
    CHECK(lap[i].real() == doctest::Approx(-xi2[i]));
    CHECK(sl[i].real() == doctest::Approx(std::sqrt(xi2[i])));
    CHECK(isl[i].real() == doctest::Approx(1.0 / std::sqrt(xi2[i])));
    CHECK(il[i].real() == doctest::Approx(1.0 / xi2[i]));
  }
  // Slot (1, 0): xi = (pi/R, 0).
  const auto d0 = multiplier_symbol(g, Multiplier::deriv(0));
  const auto r0 = multiplier_symbol(g, Multiplier::riesz(0));
  CHECK(d0[8].imag() == doctest::Approx(pi / 3.0));
  CHECK(r0[8].imag() == doctest::Approx(1.0));
}

TEST_CASE("heat and Riesz on a single cosine mode") {
  const GridSpec g(2, 16, 2.0);
  const double k = pi / 2.0;
  const Field f = sample(g, [k](const Point& x) { return std::cos(k * x[0]); });
  const Field heat = apply_multiplier(f, Multiplier::heat(0.4));
  CHECK(max_abs_diff(heat, f * std::exp(-0.4 * k * k)) < 1e-12);
  const Field riesz = apply_multiplier(f, Multiplier::riesz(0));
  const Field expected = sample(g, [k](const Point& x) { return -std::sin(k * x[0]); });
  CHECK(max_abs_diff(riesz, expected) < 1e-12);
  CHECK(lp_norm(apply_multiplier(f, Multiplier::riesz(1)), 2.0) < 1e-12);
}

TEST_CASE("constants are annihilated by negative powers and Riesz") {
  const GridSpec g(3, 8, 1.0);
  const Field c = Field::constant(g, 2.5);
  for (const auto& m : {Multiplier::inv_sqrt_lap(), Multiplier::inv_lap(), Multiplier::riesz(0), Multiplier::riesz(2)})
    CHECK(apply_multiplier(c, m).values().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heat_apply basics") {
  const GridSpec g(2, 16, 4.0);
  const Field f = sample(g, [](const Point& x) { return std::exp(-x.squaredNorm()) + 0.1 * x[0]; });
  CHECK(max_abs_diff(heat_apply(f, 0.0), f) < 1e-12);
  CHECK_THROWS_AS(heat_apply(f, -1.0), std::invalid_argument);
  // Semigroup property.
  CHECK(max_abs_diff(heat_apply(heat_apply(f, 0.2), 0.3), heat_apply(f, 0.5)) < 1e-12);
}

TEST_CASE("heat preserves positivity for resolved times") {
  const GridSpec g(2, 32, 4.0);
  const Field f = sample(g, [](const Point& x) { return x.norm() < 1.5 ? 1.0 : 0.0; });
  for (double t : {0.1, 0.5, 2.0}) CHECK(heat_apply(f, t).min() >= -1e-10 * f.max());
}

TEST_CASE("discrete delta spreads into the Gaussian kernel") {
  for (int d : {1, 2, 3}) {
    const GridSpec g(d, d == 3 ? 32 : 64, 4.0);
    const double t = 0.25;  // 4 sqrt(t) = 2 < R
    const Field out = heat_apply(delta_at_origin(g), t);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const Point y = g.point(i);
      if (y.norm() > 1.0) continue;
      const double expected = gaussian_kernel(y, t);
      worst = std::max(worst, std::abs(out[i] - expected) / expected);
    }
    CAPTURE(d);
    CHECK(worst < 0.01);
  }
}

TEST_CASE("Deriv then InvSqrtLap equals Riesz as multipliers") {
  const GridSpec g(2, 16, 3.0);
  const Field f = sample(g, [](const Point& x) { return std::exp(-x.squaredNorm()) * (1.0 + x[0]); });
  for (int j = 0; j < 2; ++j) {
    const Field a = apply_multiplier(apply_multiplier(f, Multiplier::inv_sqrt_lap()), Multiplier::deriv(j));
    const Field b = apply_multiplier(f, Multiplier::riesz(j));
    CHECK(max_abs_diff(a, b) < 1e-12);
  }
}

TEST_CASE("multiplier_matrix agrees with apply and is symmetric for real symbols") {
  const GridSpec g(2, 8, 2.0);
  const Eigen::MatrixXd M = multiplier_matrix(g, Multiplier::heat(0.1));
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  const Field f = sample(g, [](const Point& x) { return std::cos(x[0]) + x[1] * x[1]; });
  CHECK((M * f.values() - heat_apply(f, 0.1).values()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(multiplier_matrix(g, Multiplier::riesz(0)), std::invalid_argument);
}

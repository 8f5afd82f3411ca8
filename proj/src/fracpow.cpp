#include "rzlab/fracpow.hpp"

#include "rzlab/quadrature.hpp"
#include "rzlab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace rzlab {

double constants::cd(int d) {
  if (d < 2) throw std::invalid_argument("c_d is defined for d >= 2");
  return std::tgamma((d - 1) / 2.0) / (2.0 * std::pow(std::numbers::pi, (d + 1) / 2.0));
}

double exponent(FractionalPower p) {
  switch (p) {
    case FractionalPower::InvSqrt: return -0.5;
    case FractionalPower::Inv: return -1.0;
    case FractionalPower::Sqrt: return 0.5;
  }
  return 0.0;
}

const char* to_string(FractionalPower p) {
  switch (p) {
    case FractionalPower::InvSqrt: return "-1/2";
    case FractionalPower::Inv: return "-1";
    case FractionalPower::Sqrt: return "+1/2";
  }
  return "?";
}

double subordination_integrand(FractionalPower p, double t, double lambda) {
  switch (p) {
    case FractionalPower::InvSqrt: return constants::c1 * std::exp(-t * lambda) / std::sqrt(t);
    case FractionalPower::Inv: return std::exp(-t * lambda);
    case FractionalPower::Sqrt: return constants::c2 * std::expm1(-t * lambda) / (t * std::sqrt(t));
  }
  return 0.0;
}

double TimeQuadrature::evaluate(double lambda) const {
  double acc = tail_coefficient;
  for (std::size_t i = 0; i < t.size(); ++i) acc += w[i] * subordination_integrand(power, t[i], lambda);
  return acc;
}

double quadrature_identity_error(const TimeQuadrature& q, SpectralRange range, int samples) {
  double worst = 0.0;
  const double la = std::log(range.lower), lb = std::log(range.upper);
  for (int i = 0; i < samples; ++i) {
    const double lam = std::exp(samples == 1 ? la : la + (lb - la) * i / (samples - 1));
    const double exact = std::pow(lam, exponent(q.power));
    worst = std::max(worst, std::abs(q.evaluate(lam) - exact) / exact);
  }
  return worst;
}

namespace {

TimeQuadrature assemble(FractionalPower power, double u_min, double u_max, double ratio, int order) {
  const auto rule = gauss_legendre<double>(order);
  const auto edges = geometric_edges(u_min, u_max, ratio);
  TimeQuadrature q{power, u_min, u_max, ratio, static_cast<int>(edges.size()) - 1, order, {}, {}, 0.0};
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = mid + half * rule.nodes[k];
      q.t.push_back(u * u);
      q.w.push_back(2.0 * u * half * rule.weights[k]);
    }
  }
  if (power == FractionalPower::Sqrt) q.tail_coefficient = -2.0 * constants::c2 / u_max;
  return q;
}

}  // namespace

TimeQuadrature build_quadrature(FractionalPower power, SpectralRange range, double tol, const QuadratureLimits& limits) {
  if (!(range.lower > 0.0 && range.upper >= range.lower))
    throw std::invalid_argument("spectral range must satisfy 0 < lower <= upper");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("quadrature tolerance must be in (0, 1)");

  // Truncation points: the omitted head and tail each stay below tol/10 relative.
  const double u_max = std::sqrt(std::log(10.0 / tol) / range.lower);
  double u_min = 0.0;
  switch (power) {
    case FractionalPower::Inv: u_min = std::sqrt(0.1 * tol / range.upper); break;
    case FractionalPower::InvSqrt: u_min = 0.1 * tol / (2.0 * constants::c1 * std::sqrt(range.upper)); break;
    case FractionalPower::Sqrt: u_min = 0.1 * tol / (2.0 * -constants::c2 * std::sqrt(range.upper)); break;
  }
  u_min = std::min(u_min, 0.5 * u_max);

  double ratio = limits.initial_ratio;
  for (;;) {
    auto q = assemble(power, u_min, u_max, ratio, limits.order);
    if (q.panels > limits.max_panels)
      throw std::runtime_error("quadrature tolerance unreachable within " + std::to_string(limits.max_panels) +
                               " panels");
    if (quadrature_identity_error(q, range) <= tol) return q;
    ratio = std::sqrt(ratio);
  }
}

SpectralRange estimate_spectral_range(const Field& V, double tau0) {
  const auto& g = V.grid();
  const double kmax = std::numbers::pi / g.half_width() * (g.samples() / 2);
  const double upper = g.dim() * kmax * kmax + V.max();
  if (V.values().cwiseAbs().maxCoeff() == 0.0) {
    const double gap = std::pow(std::numbers::pi / g.half_width(), 2);
    return {gap, upper};
  }
  // Power iteration with K_T, T = 1; the ground state is positive so the
  // constant start vector overlaps it.
  const StrangPropagator prop(V);
  const int steps = default_steps(1.0, tau0);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(g.size()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd y = prop.evolve(x, 1.0, steps);
    const double mu = x.dot(y);
    const double next = -std::log(std::max(mu, 1e-300));
    y.normalize();
    x = std::move(y);
    if (it > 0 && std::abs(next - lambda) <= 1e-10 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return {std::max(0.5 * lambda, 1e-12), upper};
}

SpectralRange spectral_range(const DenseOperator& op) {
  const double thr = zero_threshold(op);
  double lower = op.spectral_max();
  for (Eigen::Index i = 0; i < op.eigenvalues.size(); ++i)
    if (op.eigenvalues[i] > thr) {
      lower = op.eigenvalues[i];
      break;
    }
  return {lower, op.spectral_max()};
}

namespace {

void require_mean_zero_if_free(const Field& f, const Field& V) {
  if (V.values().cwiseAbs().maxCoeff() != 0.0) return;
  const double scale = std::max(f.values().cwiseAbs().maxCoeff(), 1e-300);
  if (std::abs(f.mean()) > 1e-12 * scale)
    throw std::invalid_argument("V == 0 needs a mean-zero field (the zero mode is not invertible)");
}

}  // namespace

Field frac_power_apply(const Field& f, const Field& V, const TimeQuadrature& quad, const FracPowerOptions& opt) {
  if (!(f.grid() == V.grid())) throw std::invalid_argument("field and potential grids differ");
  require_mean_zero_if_free(f, V);
  const StrangPropagator prop(V);
  const Eigen::VectorXd& f0 = f.values();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(f0.size());
  Eigen::VectorXd cur = f0;
  double t_prev = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double t = quad.t[i];
    const double dt = t - t_prev;
    cur = prop.evolve(cur, dt, default_steps(dt, opt.tau0));
    t_prev = t;
    switch (quad.power) {
      case FractionalPower::InvSqrt: acc += (quad.w[i] * constants::c1 / std::sqrt(t)) * cur; break;
      case FractionalPower::Inv: acc += quad.w[i] * cur; break;
      case FractionalPower::Sqrt: acc += (quad.w[i] * constants::c2 / (t * std::sqrt(t))) * (cur - f0); break;
    }
  }
  if (quad.power == FractionalPower::Sqrt) acc += quad.tail_coefficient * f0;
  return Field(f.grid(), std::move(acc));
}

Field frac_power_apply(const Field& f, const Field& V, FractionalPower power, double tol, const FracPowerOptions& opt) {
  const auto quad = build_quadrature(power, estimate_spectral_range(V), tol);
  return frac_power_apply(f, V, quad, opt);
}

namespace {

ScalarFunction power_function(FractionalPower p) {
  switch (p) {
    case FractionalPower::InvSqrt: return [](double l) { return 1.0 / std::sqrt(l); };
    case FractionalPower::Inv: return [](double l) { return 1.0 / l; };
    case FractionalPower::Sqrt: return [](double l) { return std::sqrt(std::max(l, 0.0)); };
  }
  return {};
}

bool singular(const DenseOperator& op) { return op.spectral_min() <= zero_threshold(op); }

}  // namespace

Field dense_power_apply(const DenseOperator& op, const Field& f, FractionalPower power) {
  if (!(f.grid() == op.grid)) throw std::invalid_argument("field and operator grids differ");
  return Field(op.grid, apply_matrix_function(op, power_function(power), ZeroMode::Zero, f.values()));
}

Eigen::MatrixXd dense_green(const DenseOperator& op, FractionalPower power) {
  if (power == FractionalPower::Sqrt) throw std::invalid_argument("dense_green takes power -1 or -1/2");
  if (singular(op) && op.spectral_min() < -zero_threshold(op))
    throw ConsistencyError("operator has a negative eigenvalue");
  return matrix_function(op, power_function(power), ZeroMode::Zero) / op.grid.cell_volume();
}

Eigen::MatrixXd dense_green(const Field& V, FractionalPower power) {
  return dense_green(dense_schrodinger(V), power);
}

double green_mass(const DenseOperator& op, const Field& V, Eigen::Index y) {
  if (!(V.grid() == op.grid)) throw std::invalid_argument("potential and operator grids differ");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(op.grid.size());
  e[y] = 1.0;
  // Gamma(., y) h^d = L^{-1} e_y.
  const Eigen::VectorXd col = apply_matrix_function(op, power_function(FractionalPower::Inv), ZeroMode::Zero, e);
  return V.values().dot(col);
}

double green_mass(const Field& V, Eigen::Index y) { return green_mass(dense_schrodinger(V), V, y); }

Eigen::MatrixXd sqrt_lap_inv_sqrt(const DenseOperator& op) {
  const Eigen::MatrixXd S = multiplier_matrix(op.grid, Multiplier::sqrt_lap());
  const Eigen::MatrixXd Li = matrix_function(op, power_function(FractionalPower::InvSqrt), ZeroMode::Zero);
  return S * Li;
}

Field apply_sqrt_lap_inv_sqrt(const DenseOperator& op, const Field& f) {
  return apply_multiplier(dense_power_apply(op, f, FractionalPower::InvSqrt), Multiplier::sqrt_lap());
}

PerturbationKernel perturbation_W(const DenseOperator& op) {
  const auto N = op.grid.size();
  Eigen::MatrixXd A = sqrt_lap_inv_sqrt(op);
  A.diagonal().array() -= 1.0;
  if (singular(op)) A.array() += 1.0 / static_cast<double>(N);
  return {op.grid, A / (constants::c2 * op.grid.cell_volume())};
}

PerturbationKernel perturbation_W(const Field& V) { return perturbation_W(dense_schrodinger(V)); }

}  // namespace rzlab

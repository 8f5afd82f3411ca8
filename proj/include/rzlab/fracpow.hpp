#pragma once

#include "rzlab/grid.hpp"
#include "rzlab/semigroup.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace rzlab {

namespace constants {

/// Gamma(1/2)^{-1}: weight of the L^{-1/2} subordination integral.
inline const double c1 = 1.0 / std::sqrt(std::numbers::pi);
/// Gamma(-1/2)^{-1}: weight of the L^{1/2} subordination integral.
inline const double c2 = -1.0 / (2.0 * std::sqrt(std::numbers::pi));

/// (-Lap)^{-1/2} kernel on R^d is c_d |x|^{1-d}, c_d = Gamma((d-1)/2) / (2 pi^{(d+1)/2}), d >= 2.
double cd(int d);

}  // namespace constants

enum class FractionalPower { InvSqrt, Inv, Sqrt };

double exponent(FractionalPower p);
const char* to_string(FractionalPower p);

/// phi_power(t, lambda) with  sum_i w_i phi(t_i, lambda) ~ lambda^power.
///   InvSqrt: c1 e^{-t lambda} / sqrt(t)
///   Inv:     e^{-t lambda}
///   Sqrt:    c2 (e^{-t lambda} - 1) / t^{3/2}
double subordination_integrand(FractionalPower p, double t, double lambda);

struct SpectralRange {
  double lower;
  double upper;
};

/// Node/weight rule in t = u^2 on geometric Gauss panels in u.
///
/// For Sqrt the "-f" part of the integrand beyond u_max is integrated in closed
/// form and carried as tail_coefficient (= -2 c2 / u_max), so the rule reads
///   lambda^{1/2} ~ sum_i w_i phi(t_i, lambda) + tail_coefficient.
struct TimeQuadrature {
  FractionalPower power;
  double u_min;
  double u_max;
  double panel_ratio;
  int panels;
  int order;
  std::vector<double> t;
  std::vector<double> w;
  double tail_coefficient = 0.0;

  std::size_t size() const { return t.size(); }
  double evaluate(double lambda) const;
};

struct QuadratureLimits {
  int order = 8;
  double initial_ratio = 2.0;
  int max_panels = 2000;
};

/// Sizes a rule so the scalar identity holds to relative tol on 20 log-spaced
/// lambda in range. Throws if max_panels cannot reach tol.
TimeQuadrature build_quadrature(FractionalPower power, SpectralRange range, double tol,
                                const QuadratureLimits& limits = {});

/// Largest relative scalar-identity error over n log-spaced lambda in range.
double quadrature_identity_error(const TimeQuadrature& q, SpectralRange range, int samples = 20);

/// Bounds for quadrature sizing without a dense oracle: lower from a semigroup
/// power iteration (halved), upper = |xi|_max^2 + max V. V == 0 gives (pi/R)^2.
SpectralRange estimate_spectral_range(const Field& V, double tau0 = 0.01);

/// Range from a dense oracle; for V == 0 the zero mode is skipped.
SpectralRange spectral_range(const DenseOperator& op);

struct FracPowerOptions {
  double tau0 = 0.00125;
};

/// L^power f by subordination quadrature with K_t from Strang splitting.
/// For V == 0, f must be mean-zero.
Field frac_power_apply(const Field& f, const Field& V, const TimeQuadrature& quad, const FracPowerOptions& opt = {});

/// Convenience: builds the quadrature from the estimated spectral range.
Field frac_power_apply(const Field& f, const Field& V, FractionalPower power, double tol = 1e-6,
                       const FracPowerOptions& opt = {});

/// L^power f through the dense eigendecomposition (zero mode dropped when V == 0).
Field dense_power_apply(const DenseOperator& op, const Field& f, FractionalPower power);

/// Integral kernel of L^{-1} (Gamma) or L^{-1/2} (tilde Gamma): matrix / h^d,
/// so that matrix * (values * h^d) realizes the operator.
Eigen::MatrixXd dense_green(const DenseOperator& op, FractionalPower power);
Eigen::MatrixXd dense_green(const Field& V, FractionalPower power);

/// sum_z V(z) Gamma(z, y) h^d.
double green_mass(const DenseOperator& op, const Field& V, Eigen::Index y);
double green_mass(const Field& V, Eigen::Index y);

/// Dense matrix of (-Lap)^{1/2} L^{-1/2}.
Eigen::MatrixXd sqrt_lap_inv_sqrt(const DenseOperator& op);

/// (-Lap)^{1/2} L^{-1/2} f via the eigenbasis and an FFT (no N^2 matrix product).
Field apply_sqrt_lap_inv_sqrt(const DenseOperator& op, const Field& f);

/// Kernel W of the perturbation identity (-Lap)^{1/2} L^{-1/2} = Pi + c2 W,
/// Pi the projector onto range(L) (identity unless V == 0).
struct PerturbationKernel {
  GridSpec grid;
  Eigen::MatrixXd W;

  double max_abs() const { return W.cwiseAbs().maxCoeff(); }
  double min_entry() const { return W.minCoeff(); }
  /// sum_x W(x, u) h^d for every u.
  Eigen::VectorXd column_mass() const { return W.colwise().sum().transpose() * grid.cell_volume(); }
};

PerturbationKernel perturbation_W(const DenseOperator& op);
PerturbationKernel perturbation_W(const Field& V);

}  // namespace rzlab

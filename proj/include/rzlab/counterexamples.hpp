#pragma once

#include "rzlab/grid.hpp"
#include "rzlab/potentials.hpp"

#include <string>
#include <vector>

namespace rzlab {

/// Radial pieces of v = sum_m r^{eps m} / (eps^{2m} (m!)^2), r = |(x1, x2)|.
struct CE1Series {
  double v;      ///< series value
  double r_dv;   ///< r * dv/dr = sum_m eps m t_m
  int terms;     ///< terms summed
};

/// Sums until the next term drops below 1e-14 of the running sum.
CE1Series ce1_series(double r, double eps);

/// C^2 quintic smoothstep cutoff in |x|: 1 on |x| <= 1, 0 on |x| >= 2.
struct Cutoff {
  double value;
  double d1;  ///< d/d rho
  double d2;  ///< d^2/d rho^2
};
Cutoff ce1_cutoff(double rho);

struct CE1Data {
  GridSpec grid;
  double eps;
  double p;
  int max_terms;
  Field V;    ///< (x1^2+x2^2)^{(eps-2)/2}, auto-capped
  Field v;    ///< series solution of (-Lap + V) v = 0
  Field u;    ///< phi v
  Field g;    ///< -v Lap phi - 2 grad v . grad phi
  Field du1;  ///< d u / d x1 (term-wise)
};

/// Requires d >= 3, p > 2, 0 < eps < 1 - 2/p.
CE1Data ce1_build(const GridSpec& grid, double eps, double p);

/// 4th-order central-difference Laplacian with periodic wrap.
Field fd4_laplacian(const Field& f);

/// max |(-Lap_fd4 + V) v| / max(V v) over points with r > 4h at least 2 cells inside the box.
double ce1_harmonic_residual(const CE1Data& data);

/// max |(-Lap_fd4 + V) u - g| / max|g| over the same points.
double ce1_equation_residual(const CE1Data& data);

enum class Counterexample { CE1, CE2, CE3 };

Counterexample parse_counterexample(const std::string& name);
const char* to_string(Counterexample c);

struct ScanParams {
  double eps = 0.25;  ///< CE1
  double p = 4.0;     ///< CE1, CE2
  int d = 3;
};

struct ScanPoint {
  double x;      ///< delta (CE1, CE2) or rho (CE3)
  double value;  ///< A(delta), M(delta) or T(rho)
};

struct ScanReport {
  Counterexample which;
  ScanParams params;
  std::vector<ScanPoint> points;
  std::string law;         ///< "log A ~ slope log delta", "M ~ slope ln(1/delta)", "T ~ slope ln ln rho"
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double expected = 0.0;   ///< expected slope
  double max_increment_error = 0.0;  ///< CE3: worst relative increment mismatch
  bool monotone = false;
  bool conclusive = false;
};

/// Deltas for CE1 inside the regime where the m = 1 series term dominates.
std::vector<double> ce1_default_deltas(double eps);
std::vector<double> ce2_default_deltas();
std::vector<double> ce3_default_radii();

/// CE1: A(delta) = ||d1 u||_{L^p(delta < r < 1/2)} by cylindrical quadrature, slope fit of log A vs log delta.
/// CE2: M(delta) = int_{delta<|x1|, |x|<1} |x1|^{-1}, linear fit against ln(1/delta).
/// CE3: T(rho) = int_{100<|x|<rho} (1+|x|)^{-1} ln(4+|x|)^{-1} |x|^{1-d}, fit against ln ln rho.
/// xs: decreasing deltas (CE1/CE2) or increasing radii (CE3).
ScanReport divergence_scan(Counterexample which, const ScanParams& params, std::vector<double> xs);

/// CE1 A(delta) on a grid (Riemann sum of data.du1 over delta < r < 1/2); cross-check for the quadrature.
double ce1_grid_norm(const CE1Data& data, double delta);
/// CE1 A(delta) by quadrature, any eps in (0, 1).
double ce1_quadrature_norm(double eps, double p, int d, double delta);

/// c' |x1|^{-1/p} on the unit ball (c' = 1), auto-capped on x1 = 0.
Field ce2_lower_bound_field(const GridSpec& grid, double p);

struct GreenBoundedReport {
  double sup_estimate = 0.0;
  Point argmax;
  double tail_bound = 0.0;  ///< bound on the omitted |y| > radius_cap part (inf if divergent)
  std::vector<double> values;
};

/// sup_x int_{|y|<radius_cap} V(y) |x-y|^{2-d} dy over sample points: the shell formula for
/// radial V in any d >= 3, slab quadrature for CE2 (d = 3), spherical quadrature otherwise (d = 3).
GreenBoundedReport green_bounded_check(const Potential& V, int d, const std::vector<Point>& sample_points,
                                       double radius_cap);

/// Shell-theorem value for radial V: |S^{d-1}| int_0^cap V(r) r^{d-1} max(|x|, r)^{2-d} dr.
double green_bounded_radial(const Potential& V, int d, double x_norm, double radius_cap);

/// Gaussian two-sided bound check for the capped CE2 potential on a small dense grid.
struct GaussianBoundsReport {
  double upper_violation;  ///< max(k_t - h_t) relative to max h_t
  double c;                ///< fitted amplitude in (0, 1]
  double s;                ///< fitted time s >= t with c h_s <= k_t
  double lower_violation;  ///< max(c h_s - k_t) relative to max h_t at the fitted (c, s)
};

GaussianBoundsReport ce2_gaussian_bounds(const GridSpec& grid, double p, double t);

}  // namespace rzlab

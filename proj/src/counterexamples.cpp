#include "rzlab/counterexamples.hpp"

#include "rzlab/quadrature.hpp"
#include "rzlab/semigroup.hpp"
#include "rzlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rzlab {

CE1Series ce1_series(double r, double eps) {
  if (!(r >= 0.0)) throw std::invalid_argument("ce1_series needs r >= 0");
  if (r == 0.0) return {1.0, 0.0, 1};
  const double z = std::pow(r, eps) / (eps * eps);
  double term = 1.0, v = 1.0, r_dv = 0.0;
  int m = 1;
  for (; m < 100000; ++m) {
    term *= z / (double(m) * m);
    v += term;
    r_dv += eps * m * term;
    if (term < 1e-14 * v) break;
  }
  return {v, r_dv, m + 1};
}

Cutoff ce1_cutoff(double rho) {
  const double s = std::clamp(rho - 1.0, 0.0, 1.0);
  const double s2 = s * s;
  return {1.0 - s2 * s * (10.0 - 15.0 * s + 6.0 * s2), -30.0 * s2 * (1.0 - s) * (1.0 - s),
          -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)};
}

CE1Data ce1_build(const GridSpec& grid, double eps, double p) {
  const int d = grid.dim();
  if (d < 3) throw std::invalid_argument("CE1 construction needs d >= 3");
  if (!(p > 2.0)) throw std::invalid_argument("CE1 needs p > 2");
  if (!(eps > 0.0 && eps < 1.0 - 2.0 / p))
    throw std::invalid_argument("CE1 needs 0 < eps < 1 - 2/p (eps = " + std::to_string(eps) +
                                ", p = " + std::to_string(p) + ")");
  const Eigen::Index N = grid.size();
  Eigen::VectorXd v(N), u(N), g(N), du1(N);
  int max_terms = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    const Point x = grid.point(i);
    const double r = std::hypot(x[0], x[1]);
    const double rho = x.norm();
    const auto s = ce1_series(r, eps);
    const auto phi = ce1_cutoff(rho);
    max_terms = std::max(max_terms, s.terms);
    // d1 v = x1 r_dv / r^2, vanishing on the axis where x1 = 0.
    const double d1v = r > 0.0 ? x[0] * s.r_dv / (r * r) : 0.0;
    const double dphi_over_rho = rho > 0.0 ? phi.d1 / rho : 0.0;
    const double lap_phi = phi.d2 + (d - 1) * dphi_over_rho;
    v[i] = s.v;
    u[i] = phi.value * s.v;
    g[i] = -s.v * lap_phi - 2.0 * s.r_dv * dphi_over_rho;
    du1[i] = phi.value * d1v + s.v * x[0] * dphi_over_rho;
  }
  return {grid,
          eps,
          p,
          max_terms,
          discretize_potential(Potential::ce1(eps), grid),
          Field(grid, std::move(v)),
          Field(grid, std::move(u)),
          Field(grid, std::move(g)),
          Field(grid, std::move(du1))};
}

Field fd4_laplacian(const Field& f) {
  const auto& grid = f.grid();
  const int n = grid.samples(), d = grid.dim();
  if (n < 5) throw std::invalid_argument("fd4_laplacian needs n >= 5");
  const double h2 = grid.spacing() * grid.spacing();
  const auto& x = f.values();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  Eigen::Index stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const Eigen::Index k = (i / stride) % n;
      const Eigen::Index base = i - k * stride;
      auto at = [&](Eigen::Index off) { return x[base + ((k + off + n) % n) * stride]; };
      out[i] += (-at(-2) + 16.0 * at(-1) - 30.0 * x[i] + 16.0 * at(1) - at(2)) / (12.0 * h2);
    }
    stride *= n;
  }
  return Field(grid, std::move(out));
}

namespace {

/// Points where the FD stencil stays inside the box and away from the capped axis.
std::vector<Eigen::Index> interior_band(const GridSpec& grid) {
  const double h = grid.spacing();
  const double edge = grid.half_width() - 3.0 * h;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    if (std::hypot(x[0], x[1]) <= 4.0 * h) continue;
    if (x.cwiseAbs().maxCoeff() > edge) continue;
    keep.push_back(i);
  }
  if (keep.empty()) throw std::invalid_argument("grid too coarse: no points in the residual band");
  return keep;
}

}  // namespace

double ce1_harmonic_residual(const CE1Data& data) {
  const Field lap = fd4_laplacian(data.v);
  const double scale = data.V.values().cwiseProduct(data.v.values()).maxCoeff();
  double worst = 0.0;
  for (const auto i : interior_band(data.grid))
    worst = std::max(worst, std::abs(-lap[i] + data.V[i] * data.v[i]));
  return worst / scale;
}

double ce1_equation_residual(const CE1Data& data) {
  const Field lap = fd4_laplacian(data.u);
  const double scale = data.g.values().cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (const auto i : interior_band(data.grid))
    worst = std::max(worst, std::abs(-lap[i] + data.V[i] * data.u[i] - data.g[i]));
  return worst / scale;
}

Counterexample parse_counterexample(const std::string& name) {
  if (name == "CE1" || name == "ce1") return Counterexample::CE1;
  if (name == "CE2" || name == "ce2") return Counterexample::CE2;
  if (name == "CE3" || name == "ce3") return Counterexample::CE3;
  throw std::invalid_argument("unknown counterexample '" + name + "' (expected CE1, CE2 or CE3)");
}

const char* to_string(Counterexample c) {
  switch (c) {
    case Counterexample::CE1: return "CE1";
    case Counterexample::CE2: return "CE2";
    case Counterexample::CE3: return "CE3";
  }
  return "?";
}

namespace {

double sphere_area(int k) {  // |S^{k-1}| in R^k
  return 2.0 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
}

double ball_volume(int k) { return std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0); }

struct LineFit {
  double slope, intercept, r_squared;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return {slope, my - slope * mx, r2};
}

/// int_a^b f(r) dr with f evaluated in log r, panel width <= 0.25 in ln units.
template <typename F>
double log_integral(double a, double b, F&& f) {
  static const auto rule = gauss_legendre<double>(12);
  const double la = std::log(a), lb = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil((lb - la) / 0.25)));
  return integrate_panels(uniform_edges(la, lb, panels), rule, [&](double y) {
    const double r = std::exp(y);
    return f(r) * r;
  });
}

/// Cross-section integral over x' in R^{d-2} of |F(r, |x'|)|^p, F = phi rdv/r + v r phi'/rho.
double ce1_cross_section(double eps, double p, int d, double r) {
  static const auto rule = gauss_legendre<double>(16);
  const auto s = ce1_series(r, eps);
  const double core = s.r_dv / r;
  const double area = d == 3 ? 2.0 : sphere_area(d - 2);
  const double s1 = std::sqrt(std::max(0.0, 1.0 - r * r));
  const double s2 = std::sqrt(4.0 - r * r);
  // phi = 1, phi' = 0 on |x| <= 1, so F = core there.
  const double inner = std::pow(std::abs(core), p) * std::pow(s1, d - 2) / (d - 2);
  const double shell = integrate_panels(uniform_edges(s1, s2, 4), rule, [&](double sp) {
    const double rho = std::hypot(r, sp);
    const auto phi = ce1_cutoff(rho);
    const double F = phi.value * core + s.v * r * phi.d1 / rho;
    return std::pow(std::abs(F), p) * std::pow(sp, d - 3);
  });
  return area * (inner + shell);
}

double cos_power_integral(double p) {  // int_0^{2 pi} |cos theta|^p
  return 2.0 * std::sqrt(std::numbers::pi) * std::tgamma((p + 1.0) / 2.0) / std::tgamma(p / 2.0 + 1.0);
}

/// int_{a<r<b} |d1 u|^p over the cylinder slab, without the 1/p root.
double ce1_power_mass(double eps, double p, int d, double a, double b) {
  const double theta = cos_power_integral(p);
  const double mass = log_integral(a, b, [&](double r) { return r * ce1_cross_section(eps, p, d, r); });
  if (!std::isfinite(mass)) throw std::overflow_error("CE1 quadrature overflowed; delta too small for (eps, p)");
  return theta * mass;
}

void require_strict(const std::vector<double>& xs, bool decreasing, const char* what) {
  if (xs.size() < 3) throw std::invalid_argument(std::string(what) + ": need at least 3 scan points");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !std::isfinite(xs[i])) throw std::invalid_argument(std::string(what) + ": non-positive scan point");
    if (i > 0 && (decreasing ? !(xs[i] < xs[i - 1]) : !(xs[i] > xs[i - 1])))
      throw std::invalid_argument(std::string(what) + (decreasing ? ": deltas must be strictly decreasing"
                                                                  : ": radii must be strictly increasing"));
  }
}

}  // namespace

double ce1_quadrature_norm(double eps, double p, int d, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2)");
  return std::pow(ce1_power_mass(eps, p, d, delta, 0.5), 1.0 / p);
}

double ce1_grid_norm(const CE1Data& data, double delta) {
  const Region slab = [delta](const Point& x) {
    const double r = std::hypot(x[0], x[1]);
    return r > delta && r < 0.5;
  };
  if (count_in_region(data.grid, slab) == 0) throw std::invalid_argument("no grid points in delta < r < 1/2");
  return lp_norm(data.du1, data.p, slab);
}

std::vector<double> ce1_default_deltas(double eps) {
  // Largest delta with delta^{eps/2}/eps <= 1e-3, where the m = 1 term dominates A(delta).
  const double top = std::pow(1e-3 * eps, 2.0 / eps);
  std::vector<double> out;
  for (int k = 0; k < 8; ++k) out.push_back(top * std::pow(10.0, -2.0 * k));
  return out;
}

std::vector<double> ce2_default_deltas() {
  std::vector<double> out;
  for (int k = 3; k <= 10; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<double> ce3_default_radii() { return {1e3, 1e6, 1e12}; }

ScanReport divergence_scan(Counterexample which, const ScanParams& params, std::vector<double> xs) {
  ScanReport rep{which, params, {}, {}, 0.0, 0.0, 0.0, 0.0, 0.0, false, false};
  const int d = params.d;
  if (d < 3) throw std::invalid_argument("counterexample scans need d >= 3");
  std::vector<double> fx, fy;

  switch (which) {
    case Counterexample::CE1: {
      const double eps = params.eps, p = params.p;
      if (!(p > 2.0)) throw std::invalid_argument("CE1 scan needs p > 2");
      if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("CE1 scan needs eps in (0, 1)");
      if (xs.empty()) xs = ce1_default_deltas(eps);
      require_strict(xs, true, "CE1");
      if (!(xs.front() < 0.5)) throw std::invalid_argument("CE1 deltas must be below 1/2");
      rep.law = "log A ~ slope * log delta";
      rep.expected = eps - 1.0 + 2.0 / p;
      // Accumulate slab by slab so A is monotone by construction.
      double mass = ce1_power_mass(eps, p, d, xs.front(), 0.5);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) mass += ce1_power_mass(eps, p, d, xs[i], xs[i - 1]);
        const double A = std::pow(mass, 1.0 / p);
        rep.points.push_back({xs[i], A});
        fx.push_back(std::log(xs[i]));
        fy.push_back(std::log(A));
      }
      break;
    }
    case Counterexample::CE2: {
      if (xs.empty()) xs = ce2_default_deltas();
      require_strict(xs, true, "CE2");
      if (!(xs.front() < 1.0)) throw std::invalid_argument("CE2 deltas must be below 1");
      rep.law = "M ~ slope * ln(1/delta)";
      const double slab = ball_volume(d - 1);
      rep.expected = 2.0 * slab;
      auto piece = [&](double a, double b) {
        return 2.0 * slab * log_integral(a, b, [&](double s) { return std::pow(1.0 - s * s, (d - 1) / 2.0) / s; });
      };
      double mass = piece(xs.front(), 1.0);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) mass += piece(xs[i], xs[i - 1]);
        rep.points.push_back({xs[i], mass});
        fx.push_back(std::log(1.0 / xs[i]));
        fy.push_back(mass);
      }
      break;
    }
    case Counterexample::CE3: {
      if (xs.empty()) xs = ce3_default_radii();
      require_strict(xs, false, "CE3");
      if (!(xs.front() > 100.0)) throw std::invalid_argument("CE3 radii must exceed 100");
      rep.law = "T ~ slope * ln ln rho";
      const double area = sphere_area(d);
      rep.expected = area;
      auto piece = [&](double a, double b) {
        return area * log_integral(a, b, [](double r) { return 1.0 / ((1.0 + r) * std::log(4.0 + r)); });
      };
      double mass = piece(100.0, xs.front());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
          const double inc = piece(xs[i - 1], xs[i]);
          mass += inc;
          const double law = area * (std::log(std::log(xs[i])) - std::log(std::log(xs[i - 1])));
          rep.max_increment_error = std::max(rep.max_increment_error, std::abs(inc / law - 1.0));
        }
        rep.points.push_back({xs[i], mass});
        fx.push_back(std::log(std::log(xs[i])));
        fy.push_back(mass);
      }
      break;
    }
  }

  const auto fit = fit_line(fx, fy);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r_squared = fit.r_squared;
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.points.size(); ++i)
    if (rep.points[i].value < rep.points[i - 1].value) rep.monotone = false;
  // A flat CE1 profile (total log change below 0.02 per unit log delta) is a
  // conclusive "no divergence" even though R^2 is meaningless there.
  const double span = std::abs(fx.back() - fx.front());
  const double rise = std::abs(fy.back() - fy.front());
  const bool flat = which == Counterexample::CE1 && rise <= 0.02 * span;
  rep.conclusive = rep.monotone && (rep.r_squared > 0.99 || flat);
  return rep;
}

Field ce2_lower_bound_field(const GridSpec& grid, double p) {
  if (!(p > 2.0)) throw std::invalid_argument("CE2 needs p > 2");
  const double cap = std::pow(grid.spacing() / 2.0, -1.0 / p);
  return sample(grid, [&](const Point& x) {
    if (x.norm() >= 1.0) return 0.0;
    if (x[0] == 0.0) return cap;
    return std::min(cap, std::pow(std::abs(x[0]), -1.0 / p));
  });
}

namespace {

bool is_radial(const Potential& V) {
  using K = Potential::Kind;
  return V.kind == K::Zero || V.kind == K::Const || V.kind == K::Harmonic || V.kind == K::CE3;
}

double radial_value(const Potential& V, double r) {
  switch (V.kind) {
    case Potential::Kind::Zero: return 0.0;
    case Potential::Kind::Const: return V.param;
    case Potential::Kind::Harmonic: return r * r;
    case Potential::Kind::CE3: {
      const double l = std::log(4.0 + r);
      return 1.0 / ((1.0 + r) * (1.0 + r) * l * l);
    }
    default: throw std::logic_error("not a radial potential");
  }
}

double tail_bound(const Potential& V, int d, double cap) {
  switch (V.kind) {
    case Potential::Kind::Zero: return 0.0;
    case Potential::Kind::CE2: return cap >= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
    // V(r) r <= 1 / (r ln^2 r) for r >= cap, and its integral is 1 / ln(cap).
    case Potential::Kind::CE3: return cap > 1.0 ? sphere_area(d) / std::log(cap) : std::numeric_limits<double>::infinity();
    case Potential::Kind::Const:
      if (V.param == 0.0) return 0.0;
      [[fallthrough]];
    default: return std::numeric_limits<double>::infinity();
  }
}

/// int_{S^2} int_0^{rho_max} V(x + rho w) rho d rho dw, with |x + rho_max w| = cap.
double angular_green(const Potential& V, const Point& x, double cap) {
  static const auto polar = gauss_legendre<double>(48);
  static const auto radial = gauss_legendre<double>(12);
  constexpr int azimuth = 96;
  const double xx = x.squaredNorm();
  double total = 0.0;
  for (std::size_t a = 0; a < polar.nodes.size(); ++a) {
    const double c = polar.nodes[a];
    const double sn = std::sqrt(1.0 - c * c);
    for (int b = 0; b < azimuth; ++b) {
      const double phi = 2.0 * std::numbers::pi * (b + 0.5) / azimuth;
      Point w(3);
      w << c, sn * std::cos(phi), sn * std::sin(phi);
      const double xw = x.dot(w);
      const double rho_max = -xw + std::sqrt(xw * xw + cap * cap - xx);
      std::vector<double> edges{0.0};
      const double first = std::min(1e-3, 0.5 * rho_max);
      for (double e = first; e < rho_max; e *= 2.0) edges.push_back(e);
      // Split at the unit sphere, where CE2 jumps.
      const double disc = xw * xw + 1.0 - xx;
      if (disc > 0.0)
        for (double root : {-xw - std::sqrt(disc), -xw + std::sqrt(disc)})
          if (root > 0.0 && root < rho_max) edges.push_back(root);
      edges.push_back(rho_max);
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      const double line = integrate_panels(edges, radial, [&](double rho) {
        try {
          return eval_potential(V, x + rho * w) * rho;
        } catch (const SingularPoint&) {
          return 0.0;
        }
      });
      total += polar.weights[a] * (2.0 * std::numbers::pi / azimuth) * line;
    }
  }
  return total;
}

/// CE2 in d = 3: int_{-1}^{1} |y1|^{-2/p} D(x1 - y1) dy1 with D the Newton integral of the
/// cross-section disk, done in closed form along rays from the projection of x.
double ce2_slab_green(double p, const Point& x) {
  static const auto rule = gauss_legendre<double>(16);
  constexpr int rays = 256;
  const double qx = x[1], qy = x[2], qq = qx * qx + qy * qy;
  auto disk = [&](double y1) {
    const double rho2 = std::max(0.0, 1.0 - y1 * y1);
    const double a2 = (x[0] - y1) * (x[0] - y1);
    double acc = 0.0;
    for (int k = 0; k < rays; ++k) {
      const double phi = 2.0 * std::numbers::pi * (k + 0.5) / rays;
      const double qe = qx * std::cos(phi) + qy * std::sin(phi);
      const double disc = qe * qe - qq + rho2;
      if (disc <= 0.0) continue;
      const double hi = -qe + std::sqrt(disc);
      if (hi <= 0.0) continue;
      const double lo = std::max(0.0, -qe - std::sqrt(disc));
      acc += std::sqrt(a2 + hi * hi) - std::sqrt(a2 + lo * lo);
    }
    return acc * 2.0 * std::numbers::pi / rays;
  };
  // y1 = +-s^m removes the |y1|^{-2/p} singularity; split where y1 = x1.
  const double m = p / (p - 2.0);
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    std::vector<double> edges{0.0, 1.0};
    const double kink = sign * x[0];
    if (kink > 0.0 && kink < 1.0) edges.insert(edges.begin() + 1, std::pow(kink, 1.0 / m));
    std::vector<double> fine;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      for (double e : uniform_edges(edges[i], edges[i + 1], 8)) fine.push_back(e);
    fine.erase(std::unique(fine.begin(), fine.end()), fine.end());
    total += integrate_panels(fine, rule, [&](double t) { return m * disk(sign * std::pow(t, m)); });
  }
  return total;
}

}  // namespace

double green_bounded_radial(const Potential& V, int d, double x_norm, double radius_cap) {
  if (d < 3) throw std::invalid_argument("green-bounded check needs d >= 3");
  if (!is_radial(V)) throw std::invalid_argument("shell formula needs a radial potential");
  auto integrand = [&](double r) { return radial_value(V, r) * std::pow(r, d - 1) * std::pow(std::max(x_norm, r), 2 - d); };
  static const auto rule = gauss_legendre<double>(12);
  double total = 0.0;
  const double split = std::min(std::max(x_norm, 1e-3), radius_cap);
  total += integrate_panels(uniform_edges(0.0, split, 4), rule, integrand);
  if (radius_cap > split) total += log_integral(split, radius_cap, integrand);
  return sphere_area(d) * total;
}

GreenBoundedReport green_bounded_check(const Potential& V, int d, const std::vector<Point>& sample_points,
                                       double radius_cap) {
  if (d < 3) throw std::invalid_argument("green-bounded check needs d >= 3");
  if (!(radius_cap > 0.0)) throw std::invalid_argument("radius_cap must be positive");
  if (sample_points.empty()) throw std::invalid_argument("no sample points");
  const bool radial = is_radial(V);
  if (!radial && d != 3) throw std::invalid_argument("angular quadrature is implemented for d = 3 only");
  GreenBoundedReport rep;
  rep.sup_estimate = -std::numeric_limits<double>::infinity();
  for (const auto& x : sample_points) {
    if (x.size() != d) throw std::invalid_argument("sample point dimension differs from d");
    if (!(x.norm() < radius_cap)) throw std::invalid_argument("sample points must lie inside radius_cap");
    const double val = radial                                   ? green_bounded_radial(V, d, x.norm(), radius_cap)
                       : V.kind == Potential::Kind::CE2 && radius_cap >= 1.0 ? ce2_slab_green(V.param, x)
                                                                            : angular_green(V, x, radius_cap);
    rep.values.push_back(val);
    if (val > rep.sup_estimate) {
      rep.sup_estimate = val;
      rep.argmax = x;
    }
  }
  rep.tail_bound = tail_bound(V, d, radius_cap);
  return rep;
}

GaussianBoundsReport ce2_gaussian_bounds(const GridSpec& grid, double p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const Field V = discretize_potential(Potential::ce2(p), grid);
  const auto op = dense_schrodinger(V);
  const double vol = grid.cell_volume();
  const Eigen::MatrixXd k = matrix_function(op, [t](double l) { return std::exp(-t * l); }, ZeroMode::Apply) / vol;
  const Eigen::MatrixXd ht = multiplier_matrix(grid, Multiplier::heat(t)) / vol;
  const double scale = ht.maxCoeff();
  GaussianBoundsReport rep{(k - ht).maxCoeff() / scale, 0.0, t, 0.0};
  for (int j = 0; j <= 16; ++j) {
    const double s = t * (1.0 + 0.25 * j);
    const Eigen::MatrixXd hs = multiplier_matrix(grid, Multiplier::heat(s)) / vol;
    double c = 1.0;
    for (Eigen::Index i = 0; i < hs.size(); ++i)
      if (hs.data()[i] > 0.0) c = std::min(c, k.data()[i] / hs.data()[i]);
    if (c > rep.c) {
      rep.c = c;
      rep.s = s;
      rep.lower_violation = (c * hs - k).maxCoeff() / scale;
    }
  }
  return rep;
}

}  // namespace rzlab

#include "rzlab/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>
#include <vector>

namespace rzlab {

namespace {

using cd = std::complex<double>;

// Eigen::FFT caches twiddle tables; keep one per thread.
Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

void transform_axes(const GridSpec& grid, Eigen::VectorXcd& data, bool inverse) {
  const int n = grid.samples();
  const int d = grid.dim();
  auto& fft = fft_engine();
  std::vector<cd> line(static_cast<std::size_t>(n));
  std::vector<cd> out(static_cast<std::size_t>(n));
  Eigen::Index stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const Eigen::Index block = stride * n;
    for (Eigen::Index base = 0; base < data.size(); base += block) {
      for (Eigen::Index off = 0; off < stride; ++off) {
        const Eigen::Index start = base + off;
        for (int k = 0; k < n; ++k) line[static_cast<std::size_t>(k)] = data[start + k * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int k = 0; k < n; ++k) data[start + k * stride] = out[static_cast<std::size_t>(k)];
      }
    }
    stride = block;
  }
}

}  // namespace

Multiplier Multiplier::heat(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("heat time must be >= 0");
  return {Kind::Heat, t, 0};
}

Eigen::VectorXd squared_frequencies(const GridSpec& grid) {
  const int n = grid.samples();
  const double scale = std::numbers::pi / grid.half_width();
  Eigen::VectorXd xi2(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    Eigen::Index flat = i;
    double s = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double xi = scale * frequency_index(static_cast<int>(flat % n), n);
      s += xi * xi;
      flat /= n;
    }
    xi2[i] = s;
  }
  return xi2;
}

Eigen::VectorXcd multiplier_symbol(const GridSpec& grid, const Multiplier& m) {
  using K = Multiplier::Kind;
  if ((m.kind == K::Deriv || m.kind == K::Riesz) && (m.axis < 0 || m.axis >= grid.dim()))
    throw std::invalid_argument("multiplier axis out of range");
  const int n = grid.samples();
  const double scale = std::numbers::pi / grid.half_width();
  const Eigen::VectorXd xi2 = squared_frequencies(grid);
  Eigen::VectorXcd sym(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double s = xi2[i];
    const bool zero_mode = (i == 0);
    switch (m.kind) {
      case K::Heat: sym[i] = std::exp(-m.time * s); break;
      case K::Lap: sym[i] = -s; break;
      case K::SqrtLap: sym[i] = std::sqrt(s); break;
      case K::InvSqrtLap: sym[i] = zero_mode ? 0.0 : 1.0 / std::sqrt(s); break;
      case K::InvLap: sym[i] = zero_mode ? 0.0 : 1.0 / s; break;
      case K::Deriv:
      case K::Riesz: {
        const auto idx = grid.multi_index(i);
        const int k = frequency_index(idx[static_cast<std::size_t>(m.axis)], n);
        if (k == -n / 2 || zero_mode) {
          sym[i] = 0.0;
          break;
        }
        const double xi = scale * k;
        sym[i] = m.kind == K::Deriv ? cd(0.0, xi) : cd(0.0, xi / std::sqrt(s));
        break;
      }
    }
  }
  return sym;
}

Eigen::VectorXcd forward_transform(const GridSpec& grid, const Eigen::VectorXd& values) {
  return forward_transform(grid, Eigen::VectorXcd(values.cast<cd>()));
}

Eigen::VectorXcd forward_transform(const GridSpec& grid, Eigen::VectorXcd values) {
  transform_axes(grid, values, false);
  return values;
}

Eigen::VectorXd inverse_transform_real(const GridSpec& grid, Eigen::VectorXcd coeffs, double scale) {
  transform_axes(grid, coeffs, true);
  const Eigen::VectorXd re = coeffs.real();
  const double residue = coeffs.imag().cwiseAbs().maxCoeff();
  const double ref = std::max(scale, re.cwiseAbs().maxCoeff());
  if (residue > 1e-10 * ref && residue > 1e-300)
    throw ConsistencyError("imaginary residue " + std::to_string(residue) + " after inverse transform");
  return re;
}

Field apply_symbol(const Field& f, const Eigen::VectorXcd& symbol) {
  Eigen::VectorXcd c = forward_transform(f.grid(), f.values());
  c.array() *= symbol.array();
  return Field(f.grid(), inverse_transform_real(f.grid(), std::move(c), f.values().cwiseAbs().maxCoeff()));
}

Field apply_real_symbol(const Field& f, const Eigen::VectorXd& symbol) {
  Eigen::VectorXcd c = forward_transform(f.grid(), f.values());
  c.array() *= symbol.array().cast<cd>();
  return Field(f.grid(), inverse_transform_real(f.grid(), std::move(c), f.values().cwiseAbs().maxCoeff()));
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  return apply_symbol(f, multiplier_symbol(f.grid(), m));
}

Field heat_apply(const Field& f, double t) {
  const auto m = Multiplier::heat(t);
  if (t == 0.0) return f;
  return apply_multiplier(f, m);
}

Eigen::MatrixXd multiplier_matrix(const GridSpec& grid, const Multiplier& m) {
  if (!m.is_real()) throw std::invalid_argument("multiplier_matrix needs a real symbol");
  const Eigen::Index N = grid.size();
  const Eigen::VectorXcd sym = multiplier_symbol(grid, m);
  // Translation invariance: column j is column 0 shifted by j.
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(N);
  e0[0] = 1.0;
  Eigen::VectorXcd c = forward_transform(grid, e0);
  c.array() *= sym.array();
  const Eigen::VectorXd col0 = inverse_transform_real(grid, std::move(c), 1.0);
  const int d = grid.dim();
  const int n = grid.samples();
  Eigen::MatrixXi idx(d, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto mi = grid.multi_index(i);
    for (int a = 0; a < d; ++a) idx(a, i) = mi[static_cast<std::size_t>(a)];
  }
  Eigen::MatrixXd M(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) {
      Eigen::Index flat = 0;
      for (int a = 0; a < d; ++a) flat = flat * n + (idx(a, i) - idx(a, j) + n) % n;
      M(i, j) = col0[flat];
    }
  }
  return M;
}

}  // namespace rzlab

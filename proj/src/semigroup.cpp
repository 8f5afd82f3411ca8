#include "rzlab/semigroup.hpp"

#include "rzlab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

namespace rzlab {

int default_steps(double t, double tau0) {
  if (!(tau0 > 0.0)) throw std::invalid_argument("splitting step must be positive");
  return std::max(1, static_cast<int>(std::ceil(t / tau0 - 1e-12)));
}

StrangPropagator::StrangPropagator(Field potential)
    : potential_(std::move(potential)), xi2_(squared_frequencies(potential_.grid())) {
  if (potential_.min() < 0.0) throw std::invalid_argument("Schrodinger potential must be nonnegative");
}

Eigen::VectorXd StrangPropagator::evolve(const Eigen::VectorXd& f, double t, int steps) const {
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be >= 0");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (t == 0.0) return f;
  const auto& grid = potential_.grid();
  const double tau = t / steps;
  const Eigen::ArrayXd half = (-0.5 * tau * potential_.values().array()).exp();
  const Eigen::ArrayXcd heat = (-tau * xi2_.array()).exp().cast<std::complex<double>>();
  const double scale = f.cwiseAbs().maxCoeff();
  Eigen::VectorXd u = f;
  for (int s = 0; s < steps; ++s) {
    u.array() *= half;
    Eigen::VectorXcd c = forward_transform(grid, u);
    c.array() *= heat;
    u = inverse_transform_real(grid, std::move(c), scale);
    u.array() *= half;
  }
  return u;
}

Field StrangPropagator::evolve(const Field& f, double t, int steps) const {
  if (!(f.grid() == potential_.grid())) throw std::invalid_argument("field and potential grids differ");
  return Field(f.grid(), evolve(f.values(), t, steps));
}

Field strang_evolve(const Field& f, const Field& V, double t, int steps) {
  return StrangPropagator(V).evolve(f, t, steps);
}

DenseOperator decompose(const GridSpec& grid, Eigen::MatrixXd matrix) {
  if (matrix.rows() != grid.size() || matrix.cols() != grid.size())
    throw std::invalid_argument("dense operator size does not match grid");
  const double norm = matrix.cwiseAbs().maxCoeff();
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(norm, 1e-300)) throw ConsistencyError("dense operator is not symmetric");
  matrix = 0.5 * (matrix + matrix.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix);
  if (es.info() != Eigen::Success) throw ConsistencyError("symmetric eigensolver did not converge");
  return DenseOperator{grid, std::move(matrix), es.eigenvalues(), es.eigenvectors()};
}

DenseOperator dense_schrodinger(const Field& V) {
  const auto& grid = V.grid();
  require_dense(grid);
  if (V.min() < 0.0) throw std::invalid_argument("Schrodinger potential must be nonnegative");
  Eigen::MatrixXd L = -multiplier_matrix(grid, Multiplier::lap());
  L.diagonal() += V.values();
  return decompose(grid, std::move(L));
}

double zero_threshold(const DenseOperator& op) {
  const double scale = std::max(1.0, op.eigenvalues.cwiseAbs().maxCoeff());
  return 1e-9 * scale;
}

namespace {

Eigen::VectorXd spectral_values(const DenseOperator& op, const ScalarFunction& phi, ZeroMode rule) {
  const double thr = zero_threshold(op);
  Eigen::VectorXd vals(op.eigenvalues.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double lam = op.eigenvalues[i];
    const bool zero = std::abs(lam) <= thr;
    if (zero && rule == ZeroMode::Zero) {
      vals[i] = 0.0;
      continue;
    }
    vals[i] = phi(lam);
    if (!std::isfinite(vals[i]))
      throw std::domain_error("matrix function is not finite at eigenvalue " + std::to_string(lam));
  }
  return vals;
}

}  // namespace

Eigen::MatrixXd matrix_function(const DenseOperator& op, const ScalarFunction& phi, ZeroMode rule) {
  const Eigen::VectorXd vals = spectral_values(op, phi, rule);
  const auto& Q = op.eigenvectors;
  return Q * vals.asDiagonal() * Q.transpose();
}

Eigen::VectorXd apply_matrix_function(const DenseOperator& op, const ScalarFunction& phi, ZeroMode rule,
                                      const Eigen::VectorXd& f) {
  const Eigen::VectorXd vals = spectral_values(op, phi, rule);
  const auto& Q = op.eigenvectors;
  return Q * (vals.asDiagonal() * (Q.transpose() * f));
}

double dense_heat_kernel(const DenseOperator& op, double t, Eigen::Index x, Eigen::Index y) {
  const auto& Q = op.eigenvectors;
  const Eigen::ArrayXd w = (-t * op.eigenvalues.array()).exp();
  const double entry = (Q.row(x).transpose().array() * w * Q.row(y).transpose().array()).sum();
  return entry / op.grid.cell_volume();
}

double gaussian_kernel(const Point& z, double t) {
  const double d = static_cast<double>(z.size());
  return std::pow(4.0 * std::numbers::pi * t, -d / 2.0) * std::exp(-z.squaredNorm() / (4.0 * t));
}

namespace {

struct ChunkSums {
  double w = 0.0;
  double w2 = 0.0;
};

ChunkSums run_chunk(const Potential& V, const Point& x, const Point& y, double t, long count, std::uint64_t seed,
                    std::uint64_t chunk, const FeynmanKacOptions& opt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int M = opt.slices;
  const double dt = t / M;
  const auto d = x.size();
  auto V_at = [&](const Point& p) {
    try {
      return std::min(eval_potential(V, p), opt.cap);
    } catch (const SingularPoint&) {
      return opt.cap;
    }
  };
  const double v_start = V_at(x);
  const double v_end = V_at(y);
  ChunkSums sums;
  Point b(d);
  for (long path = 0; path < count; ++path) {
    b = x;
    double acc = 0.5 * (v_start + v_end);
    for (int k = 1; k < M; ++k) {
      const double remaining = t - (k - 1) * dt;
      const double frac = dt / remaining;
      const double sd = std::sqrt(2.0 * dt * (remaining - dt) / remaining);
      for (Eigen::Index a = 0; a < d; ++a) b[a] += frac * (y[a] - b[a]) + sd * normal(rng);
      acc += V_at(b);
    }
    const double w = std::exp(-t * acc / M);
    sums.w += w;
    sums.w2 += w * w;
  }
  return sums;
}

}  // namespace

KernelEstimate fk_kernel_estimate(const Potential& V, const Point& x, const Point& y, double t, long paths,
                                  std::uint64_t seed, const FeynmanKacOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("Feynman-Kac time must be positive");
  if (paths < 1) throw std::invalid_argument("Feynman-Kac needs at least one path");
  if (x.size() != y.size()) throw std::invalid_argument("endpoints have different dimensions");
  if (options.slices < 1 || options.chunk < 1) throw std::invalid_argument("bad Feynman-Kac options");

  const long chunk = options.chunk;
  const long n_chunks = (paths + chunk - 1) / chunk;
  std::vector<ChunkSums> sums(static_cast<std::size_t>(n_chunks));
  auto work = [&](long first, long stride) {
    for (long c = first; c < n_chunks; c += stride) {
      const long count = std::min(chunk, paths - c * chunk);
      sums[static_cast<std::size_t>(c)] = run_chunk(V, x, y, t, count, seed, static_cast<std::uint64_t>(c), options);
    }
  };
  const long workers = std::clamp<long>(options.workers, 1, n_chunks);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (long w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  double sw = 0.0;
  double sw2 = 0.0;
  for (const auto& s : sums) {
    sw += s.w;
    sw2 += s.w2;
  }
  const double n = static_cast<double>(paths);
  const double mean = sw / n;
  const double var = paths > 1 ? std::max(0.0, (sw2 - n * mean * mean) / (n - 1.0)) : 0.0;
  const double g = gaussian_kernel(x - y, t);
  return {g * mean, g * std::sqrt(var / n), paths};
}

}  // namespace rzlab

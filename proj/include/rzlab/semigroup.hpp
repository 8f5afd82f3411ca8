#pragma once

#include "rzlab/grid.hpp"
#include "rzlab/potentials.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace rzlab {

/// Splitting step count ceil(t / tau0), at least 1.
int default_steps(double t, double tau0 = 0.01);

/// Strang splitting for e^{-tL}, L = -Lap + diag(V):
/// (e^{-tau V/2} e^{tau Lap} e^{-tau V/2})^steps with tau = t/steps.
///
/// Holds the precomputed frequency table, so repeated evolutions on one grid
/// (quadrature nodes, step-halving runs) do not rebuild it.
class StrangPropagator {
public:
  explicit StrangPropagator(Field potential);

  const Field& potential() const { return potential_; }

  Eigen::VectorXd evolve(const Eigen::VectorXd& f, double t, int steps) const;
  Field evolve(const Field& f, double t, int steps) const;

private:
  Field potential_;
  Eigen::VectorXd xi2_;
};

Field strang_evolve(const Field& f, const Field& V, double t, int steps);

/// Symmetric grid operator with its eigendecomposition (ascending eigenvalues).
struct DenseOperator {
  GridSpec grid;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  double spectral_min() const { return eigenvalues[0]; }
  double spectral_max() const { return eigenvalues[eigenvalues.size() - 1]; }
};

/// Decomposes a symmetric matrix; throws ConsistencyError if it is not symmetric.
DenseOperator decompose(const GridSpec& grid, Eigen::MatrixXd matrix);

/// -Lap (spectral multiplier matrix) + diag(V). Respects the dense cap.
DenseOperator dense_schrodinger(const Field& V);

enum class ZeroMode {
  Zero,   ///< eigenvalues within round-off of 0 map to 0
  Apply,  ///< evaluate phi everywhere
};

using ScalarFunction = std::function<double(double)>;

/// Eigenvalues treated as zero under ZeroMode::Zero.
double zero_threshold(const DenseOperator& op);

/// Q phi(Lambda) Q^T.
Eigen::MatrixXd matrix_function(const DenseOperator& op, const ScalarFunction& phi, ZeroMode rule);

/// Q phi(Lambda) Q^T f without forming the matrix.
Eigen::VectorXd apply_matrix_function(const DenseOperator& op, const ScalarFunction& phi, ZeroMode rule,
                                      const Eigen::VectorXd& f);

/// Integral kernel k_t(x, y) of the dense semigroup: (e^{-tL})_{xy} / h^d.
double dense_heat_kernel(const DenseOperator& op, double t, Eigen::Index x, Eigen::Index y);

/// Free-space Gaussian (4 pi t)^{-d/2} exp(-|z|^2 / 4t).
double gaussian_kernel(const Point& z, double t);

struct FeynmanKacOptions {
  int slices = 64;
  int chunk = 1024;
  int workers = 1;
  double cap = 1e300;  ///< value used where a path hits the singular set
};

struct KernelEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long paths = 0;
};

/// k_t(x, y) ~ h_t(x - y) E[exp(-t * mean_s V(B_s))] over Brownian bridges from x to y.
///
/// Paths are drawn in fixed-size chunks, each seeded from (seed, chunk index),
/// and reduced in chunk order, so the result does not depend on workers.
KernelEstimate fk_kernel_estimate(const Potential& V, const Point& x, const Point& y, double t, long paths,
                                  std::uint64_t seed, const FeynmanKacOptions& options = {});

}  // namespace rzlab

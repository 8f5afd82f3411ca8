#pragma once

#include "rzlab/grid.hpp"

#include <Eigen/Core>

#include <complex>

namespace rzlab {

class ConsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fourier multipliers on the torus, frequencies xi = (pi/R) k with k in [-n/2, n/2).
///
/// Negative powers and Riesz send the mean mode to 0. The odd symbols (Deriv,
/// Riesz) also vanish on the Nyquist plane of their own axis, where i*xi_j has
/// no Hermitian partner and a real field would otherwise map to a complex one.
/// Axes are 0-based.
struct Multiplier {
  enum class Kind { Heat, Lap, InvSqrtLap, SqrtLap, InvLap, Deriv, Riesz };

  Kind kind;
  double time = 0.0;
  int axis = 0;

  static Multiplier heat(double t);
  static Multiplier lap() { return {Kind::Lap}; }
  static Multiplier inv_sqrt_lap() { return {Kind::InvSqrtLap}; }
  static Multiplier sqrt_lap() { return {Kind::SqrtLap}; }
  static Multiplier inv_lap() { return {Kind::InvLap}; }
  static Multiplier deriv(int axis) { return {Kind::Deriv, 0.0, axis}; }
  static Multiplier riesz(int axis) { return {Kind::Riesz, 0.0, axis}; }

  bool is_real() const { return kind != Kind::Deriv && kind != Kind::Riesz; }
};

/// Signed frequency index k for FFT slot m.
inline int frequency_index(int m, int n) { return m < n / 2 ? m : m - n; }

/// Squared frequency |xi|^2 for every flat FFT slot.
Eigen::VectorXd squared_frequencies(const GridSpec& grid);

/// Symbol m(xi) evaluated at every flat FFT slot.
Eigen::VectorXcd multiplier_symbol(const GridSpec& grid, const Multiplier& m);

/// Unnormalized forward DFT along every axis (e^{-i xi x} convention).
Eigen::VectorXcd forward_transform(const GridSpec& grid, const Eigen::VectorXd& values);
Eigen::VectorXcd forward_transform(const GridSpec& grid, Eigen::VectorXcd values);

/// Inverse DFT; the imaginary residue must stay below 1e-10 relative to scale.
Eigen::VectorXd inverse_transform_real(const GridSpec& grid, Eigen::VectorXcd coeffs, double scale);

Field apply_symbol(const Field& f, const Eigen::VectorXcd& symbol);
Field apply_real_symbol(const Field& f, const Eigen::VectorXd& symbol);

Field apply_multiplier(const Field& f, const Multiplier& m);

/// e^{t Lap} f. Throws for t < 0.
Field heat_apply(const Field& f, double t);

/// Dense N x N matrix of a real multiplier (column j = multiplier applied to e_j).
Eigen::MatrixXd multiplier_matrix(const GridSpec& grid, const Multiplier& m);

}  // namespace rzlab

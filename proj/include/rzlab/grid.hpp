#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rzlab {

using Point = Eigen::VectorXd;

/// Periodic box [-R, R)^d sampled with n points per axis.
///
/// Points are x_k = -R + k h with h = 2R/n, so the origin is always a grid
/// point (n is even). Flat indices are row-major with axis 0 slowest.
class GridSpec {
public:
  GridSpec(int d, int n, double R);

  int dim() const { return d_; }
  int samples() const { return n_; }
  double half_width() const { return R_; }
  double spacing() const { return 2.0 * R_ / n_; }
  double cell_volume() const { return std::pow(spacing(), d_); }
  Eigen::Index size() const { return size_; }

  std::vector<int> multi_index(Eigen::Index flat) const;
  Eigen::Index flat_index(std::span<const int> idx) const;
  Point point(Eigen::Index flat) const;
  double coordinate(int k) const { return -R_ + k * spacing(); }

  /// Flat index of the grid point nearest to x (with periodic wrap).
  Eigen::Index nearest(const Point& x) const;

  bool operator==(const GridSpec& other) const = default;

private:
  int d_;
  int n_;
  double R_;
  Eigen::Index size_;
};

/// Throws when n^d exceeds the dense-oracle cap (env RZLAB_DENSE_CAP, default 4096).
void require_dense(const GridSpec& grid);
Eigen::Index dense_cap();

class DenseCapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Real samples on a GridSpec. Immutable once constructed.
template <typename Scalar>
class BasicField {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicField(GridSpec grid, Vector values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                  " does not match grid size " + std::to_string(grid_.size()));
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      if (!std::isfinite(static_cast<double>(values_[i])))
        throw std::invalid_argument("non-finite field value at flat index " + std::to_string(i));
  }

  static BasicField zeros(const GridSpec& grid) { return BasicField(grid, Vector::Zero(grid.size())); }
  static BasicField constant(const GridSpec& grid, Scalar c) {
    return BasicField(grid, Vector::Constant(grid.size(), c));
  }

  const GridSpec& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Scalar operator[](Eigen::Index i) const { return values_[i]; }
  Eigen::Index size() const { return values_.size(); }

  Scalar max() const { return values_.maxCoeff(); }
  Scalar min() const { return values_.minCoeff(); }
  Scalar mean() const { return values_.mean(); }

  BasicField operator+(const BasicField& o) const { return {grid_, values_ + o.checked(grid_).values_}; }
  BasicField operator-(const BasicField& o) const { return {grid_, values_ - o.checked(grid_).values_}; }
  BasicField operator*(Scalar a) const { return {grid_, values_ * a}; }
  friend BasicField operator*(Scalar a, const BasicField& f) { return f * a; }

  /// Pointwise product.
  BasicField cwise(const BasicField& o) const {
    return {grid_, values_.cwiseProduct(o.checked(grid_).values_)};
  }
  BasicField without_mean() const {
    return {grid_, (values_.array() - values_.mean()).matrix()};
  }

private:
  const BasicField& checked(const GridSpec& g) const {
    if (!(g == grid_)) throw std::invalid_argument("fields live on different grids");
    return *this;
  }

  GridSpec grid_;
  Vector values_;
};

using Field = BasicField<double>;

using PointFunction = std::function<double(const Point&)>;
using Region = std::function<bool(const Point&)>;

/// values[idx] = fn(x_idx). Throws naming the point if fn is not finite there.
Field sample(const GridSpec& grid, const PointFunction& fn);

/// Riemann-sum L^p norm (p >= 1), optionally restricted to a region.
template <typename Scalar>
double lp_norm(const BasicField<Scalar>& f, double p, const Region& region = {}) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  const auto& g = f.grid();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (region && !region(g.point(i))) continue;
    acc += std::pow(std::abs(static_cast<double>(f[i])), p);
  }
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

/// Number of grid points selected by a region; zero flags an empty region.
Eigen::Index count_in_region(const GridSpec& grid, const Region& region);

/// Discrete weak-L^1 quasi-norm sup_lambda lambda * |{|f| > lambda}|.
///
/// The distribution function is a step function, so the supremum is attained
/// at a sampled |value|: max_k v_(k) * k * h^d with v sorted descending.
template <typename Scalar>
double weak_l1(const BasicField<Scalar>& f) {
  std::vector<double> v(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) v[static_cast<std::size_t>(i)] = std::abs(static_cast<double>(f[i]));
  std::sort(v.begin(), v.end(), std::greater<>());
  const double cell = f.grid().cell_volume();
  double best = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) best = std::max(best, v[k] * static_cast<double>(k + 1) * cell);
  return best;
}

// RZF1 field files: "RZF1", u32 d, u32 n, f64 R, then n^d f64 values, all little-endian.
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_field(const Field& f);
Field decode_field(std::span<const std::uint8_t> bytes);

}  // namespace rzlab

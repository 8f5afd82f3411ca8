#include "rzlab/grid.hpp"

#include <bit>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rzlab {

GridSpec::GridSpec(int d, int n, double R) : d_(d), n_(n), R_(R), size_(1) {
  if (d < 1) throw std::invalid_argument("grid dimension must be >= 1");
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("samples per axis must be even and >= 4");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("box half-width must be positive");
  for (int a = 0; a < d; ++a) {
    if (size_ > (Eigen::Index{1} << 40) / n) throw std::invalid_argument("grid too large");
    size_ *= n;
  }
}

std::vector<int> GridSpec::multi_index(Eigen::Index flat) const {
  std::vector<int> idx(static_cast<std::size_t>(d_));
  for (int a = d_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

Eigen::Index GridSpec::flat_index(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != d_) throw std::invalid_argument("multi-index has wrong length");
  Eigen::Index flat = 0;
  for (int k : idx) {
    const int w = ((k % n_) + n_) % n_;
    flat = flat * n_ + w;
  }
  return flat;
}

Point GridSpec::point(Eigen::Index flat) const {
  Point x(d_);
  for (int a = d_ - 1; a >= 0; --a) {
    x[a] = coordinate(static_cast<int>(flat % n_));
    flat /= n_;
  }
  return x;
}

Eigen::Index GridSpec::nearest(const Point& x) const {
  if (x.size() != d_) throw std::invalid_argument("point has wrong dimension");
  std::vector<int> idx(static_cast<std::size_t>(d_));
  for (int a = 0; a < d_; ++a) idx[static_cast<std::size_t>(a)] = static_cast<int>(std::lround((x[a] + R_) / spacing()));
  return flat_index(idx);
}

Eigen::Index dense_cap() {
  if (const char* env = std::getenv("RZLAB_DENSE_CAP")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return static_cast<Eigen::Index>(v);
  }
  return 4096;
}

void require_dense(const GridSpec& grid) {
  if (grid.size() > dense_cap())
    throw DenseCapExceeded("grid has " + std::to_string(grid.size()) + " points, dense cap is " +
                           std::to_string(dense_cap()));
}

Field sample(const GridSpec& grid, const PointFunction& fn) {
  Eigen::VectorXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const double y = fn(x);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "non-finite sample at point (";
      for (int a = 0; a < grid.dim(); ++a) msg << (a ? ", " : "") << x[a];
      msg << ")";
      throw std::invalid_argument(msg.str());
    }
    v[i] = y;
  }
  return Field(grid, std::move(v));
}

Eigen::Index count_in_region(const GridSpec& grid, const Region& region) {
  if (!region) return grid.size();
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) c += region(grid.point(i)) ? 1 : 0;
  return c;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v |= std::uint64_t{bytes[at + static_cast<std::size_t>(b)]} << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_field(const Field& f) {
  const auto& g = f.grid();
  std::vector<std::uint8_t> out{'R', 'Z', 'F', '1'};
  out.reserve(20 + 8 * static_cast<std::size_t>(f.size()));
  put_u32(out, static_cast<std::uint32_t>(g.dim()));
  put_u32(out, static_cast<std::uint32_t>(g.samples()));
  put_f64(out, g.half_width());
  for (Eigen::Index i = 0; i < f.size(); ++i) put_f64(out, f[i]);
  return out;
}

Field decode_field(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 20 || bytes[0] != 'R' || bytes[1] != 'Z' || bytes[2] != 'F' || bytes[3] != '1')
    throw FormatError("missing RZF1 header");
  const auto d = static_cast<int>(get_le(bytes, 4, 4));
  const auto n = static_cast<int>(get_le(bytes, 8, 4));
  const double R = std::bit_cast<double>(get_le(bytes, 12, 8));
  GridSpec grid = [&] {
    try {
      return GridSpec(d, n, R);
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("invalid RZF1 grid: ") + e.what());
    }
  }();
  const auto count = static_cast<std::size_t>(grid.size());
  if (bytes.size() != 20 + 8 * count)
    throw FormatError("RZF1 payload has " + std::to_string(bytes.size() - 20) + " bytes, expected " +
                      std::to_string(8 * count));
  Eigen::VectorXd v(grid.size());
  for (std::size_t i = 0; i < count; ++i) v[static_cast<Eigen::Index>(i)] = std::bit_cast<double>(get_le(bytes, 20 + 8 * i, 8));
  try {
    return Field(grid, std::move(v));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid RZF1 values: ") + e.what());
  }
}

void write_field(const std::filesystem::path& path, const Field& f) {
  const auto bytes = encode_field(f);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open field file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

}  // namespace rzlab

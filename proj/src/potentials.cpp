#include "rzlab/potentials.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace rzlab {

namespace {

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad " + std::string(what) + " parameter '" + std::string(s) + "'");
  return v;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Potential Potential::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant potential must be >= 0");
  return {Kind::Const, c, nullptr};
}

Potential Potential::ce1(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("CE1 needs eps in (0, 1)");
  return {Kind::CE1, eps, nullptr};
}

Potential Potential::ce2(double p) {
  if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("CE2 needs p > 2");
  return {Kind::CE2, p, nullptr};
}

Potential Potential::from_field(Field values) {
  if (values.min() < 0.0) throw std::invalid_argument("custom potential has negative samples");
  return {Kind::Custom, 0.0, std::make_shared<const Field>(std::move(values))};
}

Potential Potential::parse(std::string_view tag) {
  const auto colon = tag.find(':');
  const std::string_view head = tag.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : tag.substr(colon + 1);
  if (head == "zero") return zero();
  if (head == "harmonic") return harmonic();
  if (head == "ce3") return ce3();
  if (head == "const") return constant(parse_number(arg, "const"));
  if (head == "ce1") return ce1(parse_number(arg, "ce1"));
  if (head == "ce2") return ce2(parse_number(arg, "ce2"));
  if (head == "custom") return from_field(read_field(std::string(arg)));
  throw std::invalid_argument("unknown potential tag '" + std::string(tag) + "'");
}

std::string Potential::tag() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Const: return "const:" + format_number(param);
    case Kind::Harmonic: return "harmonic";
    case Kind::CE1: return "ce1:" + format_number(param);
    case Kind::CE2: return "ce2:" + format_number(param);
    case Kind::CE3: return "ce3";
    case Kind::Custom: return "custom";
  }
  return "unknown";
}

bool Potential::identically_zero() const {
  if (kind == Kind::Zero) return true;
  if (kind == Kind::Const) return param == 0.0;
  if (kind == Kind::Custom) return custom->values().cwiseAbs().maxCoeff() == 0.0;
  return false;
}

double eval_potential(const Potential& v, const Point& x) {
  using K = Potential::Kind;
  switch (v.kind) {
    case K::Zero: return 0.0;
    case K::Const: return v.param;
    case K::Harmonic: return x.squaredNorm();
    case K::CE1: {
      if (x.size() < 2) throw std::invalid_argument("CE1 needs d >= 2");
      const double r2 = x[0] * x[0] + x[1] * x[1];
      if (r2 == 0.0) throw SingularPoint("CE1 evaluated on the axis x1 = x2 = 0");
      return std::pow(r2, (v.param - 2.0) / 2.0);
    }
    case K::CE2: {
      if (x.squaredNorm() >= 1.0) return 0.0;
      if (x[0] == 0.0) throw SingularPoint("CE2 evaluated on the hyperplane x1 = 0");
      return std::pow(std::abs(x[0]), -2.0 / v.param);
    }
    case K::CE3: {
      const double r = x.norm();
      const double l = std::log(4.0 + r);
      return 1.0 / ((1.0 + r) * (1.0 + r) * l * l);
    }
    case K::Custom: {
      const auto& f = *v.custom;
      if (x.size() != f.grid().dim()) throw std::invalid_argument("point dimension does not match custom potential");
      return f[f.grid().nearest(x)];
    }
  }
  return 0.0;
}

double auto_cap(const Potential& v, const GridSpec& grid) {
  const double r = grid.spacing() / 2.0;
  switch (v.kind) {
    case Potential::Kind::CE1: return std::pow(r, v.param - 2.0);
    case Potential::Kind::CE2: return std::pow(r, -2.0 / v.param);
    default: return std::numeric_limits<double>::infinity();
  }
}

Field discretize_potential(const Potential& v, const GridSpec& grid, std::optional<double> cap) {
  if (v.kind == Potential::Kind::Custom) {
    if (!(v.custom->grid() == grid)) throw std::invalid_argument("custom potential lives on a different grid");
    if (!cap) return *v.custom;
    return Field(grid, v.custom->values().cwiseMin(*cap));
  }
  if (v.kind == Potential::Kind::Zero || v.kind == Potential::Kind::Const)
    return Field::constant(grid, v.kind == Potential::Kind::Zero ? 0.0 : v.param);
  const double c = cap ? *cap : auto_cap(v, grid);
  if (!(c > 0.0)) throw std::invalid_argument("cap must be positive");
  Eigen::VectorXd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    double value = 0.0;
    try {
      value = std::min(eval_potential(v, grid.point(i)), c);
    } catch (const SingularPoint&) {
      value = c;
    }
    if (!std::isfinite(value)) throw std::invalid_argument("potential " + v.tag() + " needs a finite cap on this grid");
    out[i] = value;
  }
  return Field(grid, std::move(out));
}

}  // namespace rzlab

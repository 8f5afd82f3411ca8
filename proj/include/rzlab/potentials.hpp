#pragma once

#include "rzlab/grid.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rzlab {

class SingularPoint : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Catalog of nonnegative potentials.
///
///   Harmonic  |x|^2
///   CE1(eps)  (x1^2 + x2^2)^{(eps-2)/2}          singular on x1 = x2 = 0, needs d >= 2
///   CE2(p)    |x1|^{-2/p} on the open unit ball   singular on x1 = 0 inside the ball
///   CE3       (1+|x|)^{-2} (ln(4+|x|))^{-2}
struct Potential {
  enum class Kind { Zero, Const, Harmonic, CE1, CE2, CE3, Custom };

  Kind kind = Kind::Zero;
  double param = 0.0;
  std::shared_ptr<const Field> custom;

  static Potential zero() { return {}; }
  static Potential constant(double c);
  static Potential harmonic() { return {Kind::Harmonic, 0.0, nullptr}; }
  static Potential ce1(double eps);
  static Potential ce2(double p);
  static Potential ce3() { return {Kind::CE3, 0.0, nullptr}; }
  static Potential from_field(Field values);

  /// "zero", "const:2", "harmonic", "ce1:0.25", "ce2:4", "ce3", "custom:<path>".
  static Potential parse(std::string_view tag);
  std::string tag() const;

  bool has_singular_set() const { return kind == Kind::CE1 || kind == Kind::CE2; }
  bool identically_zero() const;
};

/// Exact formula value. Throws SingularPoint on the singular set.
double eval_potential(const Potential& v, const Point& x);

/// Formula value at distance h/2 from the singular set; +inf for regular potentials.
double auto_cap(const Potential& v, const GridSpec& grid);

/// min(V, cap) at grid points, singular points set to cap. nullopt selects auto_cap.
/// Zero and Const ignore the cap.
Field discretize_potential(const Potential& v, const GridSpec& grid, std::optional<double> cap = std::nullopt);

}  // namespace rzlab

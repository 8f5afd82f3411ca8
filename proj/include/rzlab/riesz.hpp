#pragma once

#include "rzlab/fracpow.hpp"
#include "rzlab/grid.hpp"
#include "rzlab/semigroup.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace rzlab {

enum class RieszRoute {
  Direct,    ///< Deriv(j) applied to L^{-1/2} f
  Factored,  ///< Riesz(j) applied to g = (-Lap)^{1/2} L^{-1/2} f
};

struct RieszResult {
  std::vector<Field> components;
  Field magnitude;
  RieszRoute route;
  std::optional<Field> companion;  ///< g, factored route only
};

/// Any realization of f -> L^{-1/2} f (dense eigenbasis or subordination quadrature).
using InverseSqrtOperator = std::function<Field(const Field&)>;

/// The returned operator refers to op; op must outlive it.
InverseSqrtOperator dense_inverse_sqrt(const DenseOperator& op);
InverseSqrtOperator quadrature_inverse_sqrt(const Field& V, TimeQuadrature quad, FracPowerOptions opt = {});

/// (sum_j |F_j|^2)^{1/2}.
Field vector_magnitude(const std::vector<Field>& components);

RieszResult schrodinger_riesz(const Field& f, const InverseSqrtOperator& inv_sqrt_L, RieszRoute route);
RieszResult schrodinger_riesz(const Field& f, const DenseOperator& op, RieszRoute route);
RieszResult schrodinger_riesz(const Field& f, const Field& V, const TimeQuadrature& quad, RieszRoute route,
                              const FracPowerOptions& opt = {});

/// Classical vector R_j f = Riesz(j) f.
RieszResult classical_riesz(const Field& f);

/// Pointwise sqrt(V) * L^{-1/2} f.
Field sqrtV_inv_sqrt_L(const Field& f, const Field& V, const InverseSqrtOperator& inv_sqrt_L);
Field sqrtV_inv_sqrt_L(const Field& f, const Field& V, const TimeQuadrature& quad, const FracPowerOptions& opt = {});

}  // namespace rzlab

#include "rzlab/riesz.hpp"

#include "rzlab/spectral.hpp"

namespace rzlab {

InverseSqrtOperator dense_inverse_sqrt(const DenseOperator& op) {
  return [&op](const Field& f) { return dense_power_apply(op, f, FractionalPower::InvSqrt); };
}

InverseSqrtOperator quadrature_inverse_sqrt(const Field& V, TimeQuadrature quad, FracPowerOptions opt) {
  if (quad.power != FractionalPower::InvSqrt) throw std::invalid_argument("quadrature must be for power -1/2");
  return [V, quad = std::move(quad), opt](const Field& f) { return frac_power_apply(f, V, quad, opt); };
}

Field vector_magnitude(const std::vector<Field>& components) {
  if (components.empty()) throw std::invalid_argument("no components");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(components.front().size());
  for (const auto& c : components) acc += c.values().cwiseAbs2();
  return Field(components.front().grid(), acc.cwiseSqrt());
}

RieszResult schrodinger_riesz(const Field& f, const InverseSqrtOperator& inv_sqrt_L, RieszRoute route) {
  const Field u = inv_sqrt_L(f);
  const int d = f.grid().dim();
  std::vector<Field> comps;
  comps.reserve(static_cast<std::size_t>(d));
  if (route == RieszRoute::Direct) {
    for (int j = 0; j < d; ++j) comps.push_back(apply_multiplier(u, Multiplier::deriv(j)));
    Field mag = vector_magnitude(comps);
    return {std::move(comps), std::move(mag), route, std::nullopt};
  }
  Field g = apply_multiplier(u, Multiplier::sqrt_lap());
  for (int j = 0; j < d; ++j) comps.push_back(apply_multiplier(g, Multiplier::riesz(j)));
  Field mag = vector_magnitude(comps);
  return {std::move(comps), std::move(mag), route, std::move(g)};
}

RieszResult schrodinger_riesz(const Field& f, const DenseOperator& op, RieszRoute route) {
  return schrodinger_riesz(f, dense_inverse_sqrt(op), route);
}

RieszResult schrodinger_riesz(const Field& f, const Field& V, const TimeQuadrature& quad, RieszRoute route,
                              const FracPowerOptions& opt) {
  return schrodinger_riesz(f, quadrature_inverse_sqrt(V, quad, opt), route);
}

RieszResult classical_riesz(const Field& f) {
  std::vector<Field> comps;
  for (int j = 0; j < f.grid().dim(); ++j) comps.push_back(apply_multiplier(f, Multiplier::riesz(j)));
  Field mag = vector_magnitude(comps);
  return {std::move(comps), std::move(mag), RieszRoute::Factored, f};
}

Field sqrtV_inv_sqrt_L(const Field& f, const Field& V, const InverseSqrtOperator& inv_sqrt_L) {
  if (V.values().cwiseAbs().maxCoeff() == 0.0) return Field::zeros(f.grid());
  const Field u = inv_sqrt_L(f);
  return Field(f.grid(), V.values().cwiseSqrt().cwiseProduct(u.values()));
}

Field sqrtV_inv_sqrt_L(const Field& f, const Field& V, const TimeQuadrature& quad, const FracPowerOptions& opt) {
  return sqrtV_inv_sqrt_L(f, V, quadrature_inverse_sqrt(V, quad, opt));
}

}  // namespace rzlab

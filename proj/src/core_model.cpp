#include "satnls/core_model.hpp"

#include <cmath>
#include <stdexcept>

namespace satnls {

void Params::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::domain_error("Params: lambda1 and lambda2 must be positive");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("Params: alpha and beta must be positive");
  if (!(s >= 0.0)) throw std::domain_error("Params: s must be nonnegative");
  if (n < 1 || n > 3) throw std::domain_error("Params: dimension n must be 1, 2 or 3");
}

Params Params::swapped() const {
  Params p = *this;
  std::swap(p.lambda1, p.lambda2);
  std::swap(p.alpha, p.beta);
  return p;
}

void RadialGrid::validate() const {
  if (!(r_max > 0.0)) throw std::domain_error("RadialGrid: r_max must be positive");
  if (num_points < 3) throw std::domain_error("RadialGrid: need at least 3 points");
}

double RadialGrid::min_r_max(const Params& params, double decay_margin) {
  return decay_margin / std::sqrt(std::min(params.lambda1, params.lambda2));
}

RadialGrid RadialGrid::for_params(const Params& params, Eigen::Index points,
                                  double decay_margin) {
  RadialGrid g{min_r_max(params, decay_margin), points};
  g.validate();
  return g;
}

void StatePair::require_shared_grid() const {
  if (!(u.grid == v.grid))
    throw std::invalid_argument("StatePair: components must share one grid");
  if (u.values.size() != u.grid.num_points || v.values.size() != v.grid.num_points)
    throw std::invalid_argument("StatePair: value count does not match the grid");
}

double saturation_g(double z) {
  if (z < 0.0) throw std::domain_error("saturation_g: argument must be nonnegative");
  if (z < 1e-4) {
    // z^2/2 - z^3/3 + z^4/4 - z^5/5; the direct formula cancels to noise here.
    return z * z * (0.5 + z * (-1.0 / 3.0 + z * (0.25 - 0.2 * z)));
  }
  return z - std::log1p(z);
}

RadialProfile intensity_Z(const StatePair& state, const Params& params) {
  state.require_shared_grid();
  return RadialProfile(state.grid(),
                       params.alpha * state.u.values.square() +
                           params.beta * state.v.values.square());
}

Eigen::ArrayXd radial_laplacian(const RadialGrid& grid, int n, const Eigen::ArrayXd& values) {
  const Eigen::Index m = grid.num_points;
  if (values.size() != m) throw std::invalid_argument("radial_laplacian: size mismatch");
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  Eigen::ArrayXd lap = Eigen::ArrayXd::Zero(m);
  // Lap u(0) = n * u''(0) with the Neumann ghost point u(-1) = u(1).
  lap[0] = 2.0 * double(n) * (values[1] - values[0]) * inv_h2;
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    const double second = (values[i + 1] - 2.0 * values[i] + values[i - 1]) * inv_h2;
    const double first = (values[i + 1] - values[i - 1]) / (2.0 * h);
    lap[i] = second + double(n - 1) / grid.node(i) * first;
  }
  return lap;
}

std::pair<RadialProfile, RadialProfile> residual(const StatePair& state, const Params& params) {
  state.require_shared_grid();
  params.validate();
  const RadialGrid& grid = state.grid();
  const Eigen::ArrayXd& u = state.u.values;
  const Eigen::ArrayXd& v = state.v.values;

  const Eigen::ArrayXd Z = params.alpha * u.square() + params.beta * v.square();
  const Eigen::ArrayXd factor = Z / (1.0 + params.s * Z);

  Eigen::ArrayXd res_u =
      -radial_laplacian(grid, params.n, u) + params.lambda1 * u - params.alpha * u * factor;
  Eigen::ArrayXd res_v =
      -radial_laplacian(grid, params.n, v) + params.lambda2 * v - params.beta * v * factor;

  // Dirichlet truncation at r_max.
  res_u[grid.num_points - 1] = u[grid.num_points - 1];
  res_v[grid.num_points - 1] = v[grid.num_points - 1];

  return {RadialProfile(grid, std::move(res_u)), RadialProfile(grid, std::move(res_v))};
}

}  // namespace satnls

#pragma once

#include <Eigen/Core>
#include <utility>

namespace satnls {

/// Couplings and potential constants of the saturated two-component system
///
///   -Lap u + lambda1 u = alpha u Z / (1 + s Z)
///   -Lap v + lambda2 v = beta  v Z / (1 + s Z),   Z = alpha u^2 + beta v^2,
///
/// posed for radially symmetric (u, v) in dimension n.
struct Params {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double s = 0.0;  // saturation parameter
  int n = 1;

  /// Right end of the existence window of the scalar state u_s.
  double s_star_u() const { return alpha / lambda1; }
  /// Right end of the existence window of the scalar state v_s.
  double s_star_v() const { return beta / lambda2; }

  bool symmetric() const { return alpha == beta && lambda1 == lambda2; }

  /// Throws std::domain_error unless lambda1, lambda2, alpha, beta > 0,
  /// s >= 0 and n is 1, 2 or 3.
  void validate() const;

  /// Same parameters with the roles of the two equations exchanged.
  Params swapped() const;
};

/// Uniform radial grid on [0, r_max].
struct RadialGrid {
  double r_max = 15.0;
  Eigen::Index num_points = 2001;

  double spacing() const { return r_max / double(num_points - 1); }
  double node(Eigen::Index i) const { return double(i) * spacing(); }
  Eigen::ArrayXd nodes() const {
    return Eigen::ArrayXd::LinSpaced(num_points, 0.0, r_max);
  }

  void validate() const;  // r_max > 0, num_points >= 3

  /// Truncation radius required by the exponential decay of solutions:
  /// decay_margin / sqrt(min(lambda1, lambda2)).
  static double min_r_max(const Params& params, double decay_margin = 15.0);

  /// Grid whose radius satisfies the decay requirement for these parameters.
  static RadialGrid for_params(const Params& params, Eigen::Index points = 2001,
                               double decay_margin = 15.0);

  bool operator==(const RadialGrid&) const = default;
};

/// A radially symmetric function sampled on the nodes of a RadialGrid.
struct RadialProfile {
  RadialGrid grid;
  Eigen::ArrayXd values;

  RadialProfile() = default;
  RadialProfile(const RadialGrid& g, Eigen::ArrayXd v) : grid(g), values(std::move(v)) {}

  static RadialProfile zero(const RadialGrid& g) {
    return RadialProfile(g, Eigen::ArrayXd::Zero(g.num_points));
  }

  double max_abs() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
  bool all_finite() const { return values.allFinite(); }
};

/// The pair (u, v) on one shared grid.
struct StatePair {
  RadialProfile u;
  RadialProfile v;

  static StatePair zero(const RadialGrid& g) {
    return StatePair{RadialProfile::zero(g), RadialProfile::zero(g)};
  }

  const RadialGrid& grid() const { return u.grid; }
  void require_shared_grid() const;  // throws std::invalid_argument on mismatch
};

/// g(z) = z - ln(1+z).  A short series is used for z below 1e-4 where the
/// direct formula loses all significant digits to cancellation.
/// Throws std::domain_error for z < 0.
double saturation_g(double z);

/// Pointwise intensity Z = alpha u^2 + beta v^2.
RadialProfile intensity_Z(const StatePair& state, const Params& params);

/// Discrete radial Laplacian  u'' + (n-1)/r u'  on the grid values.
/// At r = 0 the removable singularity is handled via Lap u(0) = n u''(0)
/// with a one-sided second difference (Neumann closure u'(0) = 0).
/// The entry at the last node is left as 0; boundary handling is the caller's.
Eigen::ArrayXd radial_laplacian(const RadialGrid& grid, int n, const Eigen::ArrayXd& values);

/// Discretized left-minus-right sides of both equations of the system.
/// Interior nodes use second-order central differences, r = 0 the regularized
/// Laplacian, and the last node carries the Dirichlet condition (residual = value).
std::pair<RadialProfile, RadialProfile> residual(const StatePair& state, const Params& params);

}  // namespace satnls

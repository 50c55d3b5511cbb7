#pragma once

#include <vector>

#include "satnls/core_model.hpp"

namespace satnls {

/// Nonnegative radial potential vanishing at infinity.
struct Potential {
  RadialGrid grid;
  Eigen::ArrayXd values;

  void validate() const;  // nonnegative values, matching size
};

/// Leading eigenvalues mu_0 > mu_1 > ... of the compact operator
/// phi -> (-Lap + lambda2)^{-1} (W phi) on radial functions, with
/// eigenfunctions normalized in the lambda2-norm and sign fixed so the
/// value at r = 0 is positive.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<RadialProfile> eigenfunctions;
  bool truncated = false;  // fewer positive eigenvalues than requested
};

/// W_s = alpha beta u_s^2 / (1 + s alpha u_s^2), the potential of the
/// linearization transverse to the semitrivial branch.
Potential potential_Ws(const RadialProfile& us, const Params& params);

/// Largest k_max eigenvalues of  mu (-Lap + lambda2) phi = W phi  on the grid.
///
/// The discretization is conservative second-order finite differences with
/// r^{n-1} control-volume weights, which makes the problem a symmetric
/// tridiagonal pencil  M_W phi = mu B phi  with B positive definite
/// (Neumann closure at r = 0, Dirichlet at r_max).  Eigenvalues are located
/// by Sturm-count bisection and eigenvectors by inverse iteration.
Spectrum eigenvalues_L(const Potential& w, double lambda2, int n, int k_max);

/// s -> 0 limit of mu_k(s).  In n = 1 the closed form
/// (beta/alpha) * 2 / ((omega + 2k)(omega + 2k + 1)), omega = sqrt(lambda2/lambda1);
/// in n = 2, 3 computed from the s = 0 scalar ground state on the given grid.
double mu_bar(const Params& params, int k, const RadialGrid& grid);
double mu_bar(const Params& params, int k);  // builds a default grid when needed

/// Common s -> alpha/lambda1 limit of every eigenvalue curve:
/// beta lambda1 / (alpha lambda2).
double mu_limit_saturation(const Params& params);

/// k-th eigenvalue of the box-potential operator
/// phi -> (-Lap + lambda)^{-1}((kappa - eps) 1_{B_{1/eps}} phi).
/// Requires 1/eps < grid.r_max and kappa > eps.
double box_potential_eigen(double kappa, double lambda, double eps, int k, int n,
                           const RadialGrid& grid);

}  // namespace satnls

#pragma once

#include <Eigen/Core>
#include <functional>

namespace satnls {

struct RadialGrid;

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a, b].
/// Subdivides until the local error estimate drops below
/// max(abs_tol, rel_tol * |integral|) distributed over the subintervals.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, double rel_tol = 1e-12, int max_depth = 48);

/// Surface area of the unit sphere S^{n-1}: 2, 2*pi, 4*pi for n = 1, 2, 3.
/// With this factor, integrals over the radial grid reproduce integrals over R^n.
double sphere_area(int n);

/// Composite Simpson weights on a uniform grid of `count` points with spacing h.
/// For an even interval count the classic 1,4,2,...,4,1 pattern is used; an odd
/// interval count is handled by a 3/8 rule on the last three cells.
Eigen::ArrayXd simpson_weights(Eigen::Index count, double h);

/// Quadrature weights for integrals over R^n of radial integrands:
/// Simpson weights times r^{n-1} times sphere_area(n).
Eigen::ArrayXd radial_weights(const RadialGrid& grid, int n);

/// Integral over R^n of a radial integrand sampled on the grid nodes.
double integrate_radial(const RadialGrid& grid, int n, const Eigen::ArrayXd& f);

/// First derivative on the uniform grid: central differences in the interior,
/// one-sided second-order stencils at the ends.
Eigen::ArrayXd grid_derivative(const RadialGrid& grid, const Eigen::ArrayXd& values);

/// Squared norm  ||u||_lambda^2 = int_{R^n} |grad u|^2 + lambda u^2
/// computed by Simpson quadrature with the r^{n-1} weight.
double h1_norm_sq(const RadialGrid& grid, int n, const Eigen::ArrayXd& values, double lambda);

}  // namespace satnls

#include "satnls/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "satnls/core_model.hpp"

namespace satnls {
namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(c);
  double result_g = fc * kWg[3];
  double result_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = half * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    result_k += kWgk[j] * fsum;
    if (j % 2 == 1) result_g += kWg[j / 2] * fsum;
  }
  return {result_k * half, std::abs((result_k - result_g) * half)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int max_depth) {
  const GkResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= max_depth) return r.value;
  const double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         integrate_rec(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  const GkResult first = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(first.value));
  if (first.error <= tol) return first.value;
  const double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, 0.5 * tol, 1, max_depth) +
         integrate_rec(f, c, b, 0.5 * tol, 1, max_depth);
}

double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw std::domain_error("sphere_area: dimension must be 1, 2 or 3");
  }
}

Eigen::ArrayXd simpson_weights(Eigen::Index count, double h) {
  if (count < 3) throw std::invalid_argument("simpson_weights: need at least 3 points");
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(count);
  const Eigen::Index intervals = count - 1;
  // Simpson pairs over the leading even stretch.
  Eigen::Index simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  for (Eigen::Index i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (intervals % 2 != 0) {
    // 3/8 rule on the final three cells.
    const Eigen::Index i = simpson_end;
    w[i] += 3.0 * h / 8.0;
    w[i + 1] += 9.0 * h / 8.0;
    w[i + 2] += 9.0 * h / 8.0;
    w[i + 3] += 3.0 * h / 8.0;
  }
  return w;
}

Eigen::ArrayXd radial_weights(const RadialGrid& grid, int n) {
  Eigen::ArrayXd w = simpson_weights(grid.num_points, grid.spacing());
  if (n > 1) w *= grid.nodes().pow(n - 1);
  return w * sphere_area(n);
}

double integrate_radial(const RadialGrid& grid, int n, const Eigen::ArrayXd& f) {
  if (f.size() != grid.num_points)
    throw std::invalid_argument("integrate_radial: size mismatch");
  return (radial_weights(grid, n) * f).sum();
}

Eigen::ArrayXd grid_derivative(const RadialGrid& grid, const Eigen::ArrayXd& values) {
  const Eigen::Index m = values.size();
  if (m != grid.num_points || m < 3)
    throw std::invalid_argument("grid_derivative: size mismatch");
  const double h = grid.spacing();
  Eigen::ArrayXd d(m);
  d.segment(1, m - 2) = (values.tail(m - 2) - values.head(m - 2)) / (2.0 * h);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  d[m - 1] = (3.0 * values[m - 1] - 4.0 * values[m - 2] + values[m - 3]) / (2.0 * h);
  return d;
}

double h1_norm_sq(const RadialGrid& grid, int n, const Eigen::ArrayXd& values, double lambda) {
  const Eigen::ArrayXd d = grid_derivative(grid, values);
  return integrate_radial(grid, n, d.square() + lambda * values.square());
}

}  // namespace satnls

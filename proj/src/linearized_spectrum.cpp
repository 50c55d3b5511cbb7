#include "satnls/linearized_spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "satnls/quadrature.hpp"
#include "satnls/scalar_ground_state.hpp"

namespace satnls {
namespace {

// Symmetric tridiagonal pencil  M phi = mu B phi  with M = diag(m_diag) >= 0
// and B = tridiag(b_off, b_diag, b_off) positive definite.  Unknowns are the
// grid nodes 0 .. N-2 (the Dirichlet node at r_max is eliminated).
struct Pencil {
  Eigen::ArrayXd m_diag;
  Eigen::ArrayXd b_diag;
  Eigen::ArrayXd b_off;  // size N-1 relative to the reduced system

  Eigen::Index size() const { return b_diag.size(); }

  // Number of pencil eigenvalues strictly greater than x (Sturm count on M - x B).
  Eigen::Index count_above(double x) const {
    const Eigen::Index m = size();
    Eigen::Index positives = 0;
    double d_prev = m_diag[0] - x * b_diag[0];
    if (d_prev == 0.0) d_prev = -1e-300;
    if (d_prev > 0.0) ++positives;
    for (Eigen::Index i = 1; i < m; ++i) {
      const double off = -x * b_off[i - 1];
      double d = (m_diag[i] - x * b_diag[i]) - off * off / d_prev;
      if (d == 0.0) d = -1e-300;
      if (d > 0.0) ++positives;
      d_prev = d;
    }
    return positives;
  }

  // Solve (M - x B) sol = rhs by tridiagonal LU with partial pivoting.
  Eigen::ArrayXd shifted_solve(double x, Eigen::ArrayXd rhs) const {
    const Eigen::Index m = size();
    Eigen::ArrayXd dl(m), d(m), du(m), du2(m);
    for (Eigen::Index i = 0; i < m; ++i) d[i] = m_diag[i] - x * b_diag[i];
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      dl[i] = -x * b_off[i];  // subdiagonal entry (i+1, i)
      du[i] = -x * b_off[i];  // superdiagonal entry (i, i+1)
    }
    du2.setZero();
    // Forward elimination with row swaps.
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        double piv = d[i];
        if (piv == 0.0) piv = 1e-300;
        const double l = dl[i] / piv;
        d[i + 1] -= l * du[i];
        rhs[i + 1] -= l * rhs[i];
        if (i + 2 < m) du2[i] = 0.0;
      } else {
        const double l = d[i] / dl[i];
        // swap rows i and i+1
        d[i] = dl[i];
        const double tmp_du = du[i];
        du[i] = d[i + 1];
        d[i + 1] = tmp_du - l * d[i + 1];
        if (i + 2 < m) {
          du2[i] = du[i + 1];
          du[i + 1] = -l * du[i + 1];
        }
        std::swap(rhs[i], rhs[i + 1]);
        rhs[i + 1] -= l * rhs[i];
      }
    }
    // Back substitution.
    Eigen::ArrayXd sol(m);
    for (Eigen::Index i = m - 1; i >= 0; --i) {
      double acc = rhs[i];
      if (i + 1 < m) acc -= du[i] * sol[i + 1];
      if (i + 2 < m) acc -= du2[i] * sol[i + 2];
      double piv = d[i];
      if (piv == 0.0) piv = 1e-300;
      sol[i] = acc / piv;
    }
    return sol;
  }

  double b_inner(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) const {
    const Eigen::Index m = size();
    double acc = (b_diag * x * y).sum();
    for (Eigen::Index i = 0; i + 1 < m; ++i) acc += b_off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
    return acc;
  }

  Eigen::ArrayXd b_apply(const Eigen::ArrayXd& x) const {
    const Eigen::Index m = size();
    Eigen::ArrayXd y = b_diag * x;
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      y[i] += b_off[i] * x[i + 1];
      y[i + 1] += b_off[i] * x[i];
    }
    return y;
  }
};

Pencil assemble_pencil(const Potential& w, double lambda2, int n) {
  const RadialGrid& grid = w.grid;
  const Eigen::Index m = grid.num_points - 1;  // Dirichlet node dropped
  const double h = grid.spacing();

  Pencil pencil;
  pencil.m_diag.resize(m);
  pencil.b_diag.resize(m);
  pencil.b_off.resize(m - 1);

  const auto rpow = [n](double r) { return n == 1 ? 1.0 : std::pow(r, n - 1); };
  // Control-volume mass around node i: int r^{n-1} over [r_{i-1/2}, r_{i+1/2}].
  const auto mass = [&](Eigen::Index i) {
    const double rl = (i == 0) ? 0.0 : grid.node(i) - 0.5 * h;
    const double rr = grid.node(i) + 0.5 * h;
    return (std::pow(rr, n) - std::pow(rl, n)) / double(n);
  };

  for (Eigen::Index i = 0; i < m; ++i) {
    const double flux_l = (i == 0) ? 0.0 : rpow(grid.node(i) - 0.5 * h) / h;
    const double flux_r = rpow(grid.node(i) + 0.5 * h) / h;
    const double mi = mass(i);
    pencil.b_diag[i] = flux_l + flux_r + lambda2 * mi;
    pencil.m_diag[i] = w.values[i] * mi;
    if (i + 1 < m) pencil.b_off[i] = -flux_r;
  }
  return pencil;
}

}  // namespace

void Potential::validate() const {
  grid.validate();
  if (values.size() != grid.num_points)
    throw std::invalid_argument("Potential: value count does not match the grid");
  if ((values < 0.0).any())
    throw std::domain_error("Potential: values must be nonnegative");
}

Potential potential_Ws(const RadialProfile& us, const Params& params) {
  params.validate();
  const Eigen::ArrayXd au2 = params.alpha * us.values.square();
  return Potential{us.grid, params.beta * au2 / (1.0 + params.s * au2)};
}

Spectrum eigenvalues_L(const Potential& w, double lambda2, int n, int k_max) {
  w.validate();
  if (!(lambda2 > 0.0)) throw std::domain_error("eigenvalues_L: lambda2 must be positive");
  if (n < 1 || n > 3) throw std::domain_error("eigenvalues_L: n must be 1, 2 or 3");
  if (k_max < 1) throw std::domain_error("eigenvalues_L: k_max must be at least 1");

  Spectrum spec;
  const double w_max = w.values.maxCoeff();
  if (w_max <= 0.0) {
    spec.truncated = true;  // the operator is zero; no positive eigenvalues
    return spec;
  }

  const Pencil pencil = assemble_pencil(w, lambda2, n);
  const double mu_hi_bound = w_max / lambda2 * (1.0 + 1e-12) + 1e-300;
  const double mu_floor = 1e-14 * w_max / lambda2;
  const Eigen::Index available = pencil.count_above(mu_floor);
  const int count = int(std::min<Eigen::Index>(k_max, available));
  spec.truncated = count < k_max;

  const RadialGrid& grid = w.grid;
  const double area = sphere_area(n);
  for (int k = 0; k < count; ++k) {
    double lo = mu_floor, hi = mu_hi_bound;
    // mu_k is where the count of eigenvalues above drops from k+1 to k.
    for (int it = 0; it < 140 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pencil.count_above(mid) >= k + 1 ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    spec.eigenvalues.push_back(mu);

    // Inverse iteration on (M - mu B); the deterministic start vector carries
    // a k-dependent oscillation so it is never orthogonal to the target.
    const Eigen::Index m = pencil.size();
    Eigen::ArrayXd vec(m);
    const Eigen::ArrayXd rn = grid.nodes().head(m);
    vec = (double(k + 1) * M_PI * rn / grid.r_max).cos() + 0.5 * (7.0 * rn).sin();
    vec /= std::sqrt(vec.square().sum());
    for (int it = 0; it < 5; ++it) {
      vec = pencil.shifted_solve(mu, pencil.b_apply(vec));
      vec /= std::sqrt(vec.square().sum());
    }
    const double norm_sq = area * pencil.b_inner(vec, vec);
    vec /= std::sqrt(norm_sq);
    if (vec[0] < 0.0) vec = -vec;

    Eigen::ArrayXd full = Eigen::ArrayXd::Zero(grid.num_points);
    full.head(m) = vec;
    spec.eigenfunctions.emplace_back(grid, std::move(full));
  }
  return spec;
}

double mu_bar(const Params& params, int k, const RadialGrid& grid) {
  params.validate();
  if (k < 0) throw std::domain_error("mu_bar: k must be nonnegative");
  if (params.n == 1) {
    const double omega = std::sqrt(params.lambda2 / params.lambda1);
    return params.beta / params.alpha * 2.0 /
           ((omega + 2.0 * k) * (omega + 2.0 * k + 1.0));
  }
  Params p0 = params;
  p0.s = 0.0;
  const RadialProfile u0 = scalar_ground_state(ScalarProblem::first_of(p0), grid);
  const Spectrum spec = eigenvalues_L(potential_Ws(u0, p0), params.lambda2, params.n, k + 1);
  if (int(spec.eigenvalues.size()) <= k)
    throw std::runtime_error("mu_bar: requested eigenvalue not present in the spectrum");
  return spec.eigenvalues[k];
}

double mu_bar(const Params& params, int k) {
  if (params.n == 1) return mu_bar(params, k, RadialGrid{});
  return mu_bar(params, k, RadialGrid::for_params(params, 3001));
}

double mu_limit_saturation(const Params& params) {
  params.validate();
  return params.beta * params.lambda1 / (params.alpha * params.lambda2);
}

double box_potential_eigen(double kappa, double lambda, double eps, int k, int n,
                           const RadialGrid& grid) {
  if (!(kappa > 0.0) || !(lambda > 0.0) || !(eps > 0.0))
    throw std::domain_error("box_potential_eigen: kappa, lambda, eps must be positive");
  if (!(kappa - eps > 0.0))
    throw std::domain_error("box_potential_eigen: kappa - eps must be positive");
  if (1.0 / eps >= grid.r_max)
    throw std::domain_error("box_potential_eigen: box radius 1/eps exceeds the grid radius");

  const double radius = 1.0 / eps;
  Eigen::ArrayXd w =
      (grid.nodes() <= radius).select(Eigen::ArrayXd::Constant(grid.num_points, kappa - eps),
                                      Eigen::ArrayXd::Zero(grid.num_points));
  const Spectrum spec = eigenvalues_L(Potential{grid, std::move(w)}, lambda, n, k + 1);
  if (int(spec.eigenvalues.size()) <= k)
    throw std::runtime_error("box_potential_eigen: eigenvalue index exceeds positive spectrum");
  return spec.eigenvalues[k];
}

}  // namespace satnls

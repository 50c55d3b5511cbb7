#include "satnls/bifurcation_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "satnls/scalar_ground_state.hpp"

namespace satnls {
namespace {

// mu_k(s) together with the spectrum it came from (for the kernel function).
struct CurveSample {
  std::vector<double> mu;  // mu_0 .. mu_{k_max-1}, padded with 0 when absent
  Spectrum spectrum;
};

CurveSample sample_curves(const Params& params, double s, int k_max, const RadialGrid& grid) {
  Params p = params;
  p.s = s;
  const RadialProfile us = scalar_ground_state(ScalarProblem::first_of(p), grid);
  CurveSample sample;
  sample.spectrum = eigenvalues_L(potential_Ws(us, p), p.lambda2, p.n, k_max);
  sample.mu.assign(k_max, 0.0);
  for (int k = 0; k < int(sample.spectrum.eigenvalues.size()); ++k)
    sample.mu[k] = sample.spectrum.eigenvalues[k];
  return sample;
}

}  // namespace

std::vector<double> default_s_grid(const Params& params, int count) {
  params.validate();
  if (count < 2) throw std::invalid_argument("default_s_grid: need at least 2 points");
  const double s_star = params.s_star_u();
  const double lo = std::log(0.01 * s_star), hi = std::log(0.99 * s_star);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(lo + (hi - lo) * double(i) / double(count - 1));
  return grid;
}

BifurcationScan find_bifurcation_points(const Params& params, int k_lo, int k_hi,
                                        const std::vector<double>& s_grid, double tol,
                                        const RadialGrid& grid) {
  params.validate();
  grid.validate();
  if (k_lo < 0 || k_hi < k_lo)
    throw std::invalid_argument("find_bifurcation_points: bad k range");
  if (s_grid.size() < 2)
    throw std::invalid_argument("find_bifurcation_points: s_grid needs at least 2 points");
  if (!(params.lambda2 / params.lambda1 < params.beta / params.alpha)) {
    std::ostringstream msg;
    msg << "find_bifurcation_points: hypothesis lambda2/lambda1 < beta/alpha violated ("
        << params.lambda2 / params.lambda1 << " >= " << params.beta / params.alpha << ")";
    throw std::domain_error(msg.str());
  }
  const double s_star = params.s_star_u();
  for (double s : s_grid)
    if (!(s > 0.0) || !(s < s_star))
      throw std::domain_error("find_bifurcation_points: s_grid must lie in (0, alpha/lambda1)");

  const int k_max = k_hi + 1;
  std::vector<std::vector<double>> mu(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i)
    mu[i] = sample_curves(params, s_grid[i], k_max, grid).mu;

  BifurcationScan scan;
  for (int k = k_lo; k <= k_hi; ++k) {
    bool found = false;
    for (std::size_t i = 0; i + 1 < s_grid.size(); ++i) {
      const double f_lo = mu[i][k] - 1.0, f_hi = mu[i + 1][k] - 1.0;
      if (mu[i][k] == 0.0 || mu[i + 1][k] == 0.0) continue;  // curve absent here
      if (f_lo == 0.0 || f_lo * f_hi >= 0.0) continue;

      double lo = s_grid[i], hi = s_grid[i + 1];
      double mu_mid = mu[i][k];
      Spectrum spec_mid;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        CurveSample sample = sample_curves(params, mid, k + 1, grid);
        mu_mid = sample.mu[k];
        spec_mid = std::move(sample.spectrum);
        if (std::abs(mu_mid - 1.0) <= tol || (hi - lo) <= 1e-15 * hi) {
          lo = hi = mid;
          break;
        }
        if ((mu_mid - 1.0) * f_lo > 0.0) lo = mid; else hi = mid;
      }
      const double s_k = 0.5 * (lo + hi);
      BifurcationPoint point;
      point.k = k;
      point.s_k = s_k;
      point.s_lo = s_grid[i];
      point.s_hi = s_grid[i + 1];
      point.mu_residual = std::abs(mu_mid - 1.0);
      if (int(spec_mid.eigenfunctions.size()) > k)
        point.kernel_fn = spec_mid.eigenfunctions[k];
      scan.points.push_back(std::move(point));
      found = true;
    }
    if (!found) scan.ks_without_crossing.push_back(k);
  }
  return scan;
}

bool check_corollary1(const Params& params) {
  params.validate();
  if (params.n != 2 && params.n != 3)
    throw std::domain_error("check_corollary1: stated for n = 2, 3");
  const double ratio = params.lambda2 / params.lambda1;
  const double coupling_ratio = params.beta / params.alpha;
  return ratio < coupling_ratio &&
         coupling_ratio < std::pow(ratio, (4.0 - params.n) / 4.0);
}

bool check_corollary2(const Params& params, int k0) {
  params.validate();
  if (params.n != 1) throw std::domain_error("check_corollary2: stated for n = 1");
  if (k0 < 0) throw std::domain_error("check_corollary2: k0 must be nonnegative");
  const double ratio = params.lambda2 / params.lambda1;
  const double coupling_ratio = params.beta / params.alpha;
  const double omega = std::sqrt(ratio);
  const double bound = 0.5 * (omega + 2.0 * k0) * (omega + 2.0 * k0 + 1.0);
  return ratio < coupling_ratio && coupling_ratio < bound;
}

PositivityVerdict positivity_constraint(const Params& params) {
  params.validate();
  if (params.symmetric()) return {PositivityKind::SymmetricFamily, std::nullopt};
  if (params.lambda1 != params.lambda2 && params.alpha != params.beta) {
    const double bound = (params.alpha - params.beta) / (params.lambda1 - params.lambda2);
    if (bound > 0.0 && bound < std::min(params.s_star_u(), params.s_star_v()))
      return {PositivityKind::Bound, bound};
  }
  return {PositivityKind::NoPositive, std::nullopt};
}

NodeCount count_nodes(const RadialProfile& profile, double tail_threshold) {
  const double scale = profile.max_abs();
  if (scale == 0.0) return {0, true};
  const double floor = tail_threshold * scale;
  int count = 0;
  double prev = 0.0;
  bool seen = false;
  for (Eigen::Index i = 0; i < profile.values.size(); ++i) {
    const double v = profile.values[i];
    if (std::abs(v) <= floor) continue;
    if (seen && v * prev < 0.0) ++count;
    prev = v;
    seen = true;
  }
  if (!seen) return {0, true};
  return {count, false};
}

}  // namespace satnls

#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <utility>
#include <vector>

#include "satnls/bifurcation_analysis.hpp"
#include "satnls/core_model.hpp"

namespace satnls {

struct ContinuationConfig {
  double initial_amplitude = 1e-3;  // seed amplitude relative to max |u_s|
  double step = 0.01;               // initial arclength step
  int max_steps = 200;
  double newton_tol = 1e-9;         // sup-norm residual target
  int newton_max_iter = 25;
  double step_min = 1e-4;
  double step_max = 0.05;

  void validate() const;
};

/// 2x2 block operator of partial derivatives of the discretized residual,
/// assembled as a sparse matrix on the stacked state [u; v].  The pointwise
/// coefficients are
///   d(rhs_u)/du = (s a Z^2 + 3 a^2 u^2 + a b v^2) / (1+sZ)^2,
///   d(rhs_u)/dv = d(rhs_v)/du = 2 a b u v / (1+sZ)^2,
///   d(rhs_v)/dv = (s b Z^2 + 3 b^2 v^2 + a b u^2) / (1+sZ)^2,
/// written with a = alpha, b = beta.  Dirichlet rows at r_max are identity.
Eigen::SparseMatrix<double> jacobian(const StatePair& state, const Params& params);

struct NewtonResult {
  StatePair state;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  bool near_singular = false;
};

/// Damped Newton on the discretized residual at fixed s (params.s is ignored
/// in favour of the argument).
NewtonResult newton_solve(const StatePair& initial, double s, const Params& params,
                          const ContinuationConfig& cfg);

struct BranchPoint {
  StatePair state;
  double s = 0.0;
  double residual_norm = 0.0;
  double energy = 0.0;
  std::pair<int, int> nodal_type{0, 0};
  std::pair<double, double> min_values{0.0, 0.0};  // over nodes before the Dirichlet node
  std::pair<double, double> norms{0.0, 0.0};       // (||u||_lambda1, ||v||_lambda2)
};

struct Branch {
  int k = 0;
  BifurcationPoint origin;
  std::vector<BranchPoint> points;
  std::string termination;
};

/// Pseudo-arclength continuation of the branch emanating at the bifurcation
/// point.  Seeds at (u_{s_k}, direction * amplitude * kernel_fn, s_k) with the
/// kernel amplitude pinned and s free, then follows the branch with an
/// adaptive arclength step (halve on failure, grow after easy successes).
/// Stops at the parameter domain boundary, on persistent step failure, when
/// the branch returns to the semitrivial set (||v||_inf < 10 newton_tol), or
/// after max_steps.
Branch continue_branch(const BifurcationPoint& origin, const Params& params,
                       const ContinuationConfig& cfg, int direction);

/// (||u||_{lambda1}, ||v||_{lambda2}) by radial Simpson quadrature over R^n.
std::pair<double, double> solution_norms(const StatePair& state, const Params& params);

}  // namespace satnls

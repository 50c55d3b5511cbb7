#include "satnls/branch_continuation.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "satnls/energy_functional.hpp"
#include "satnls/quadrature.hpp"
#include "satnls/scalar_ground_state.hpp"

namespace satnls {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

Eigen::VectorXd flatten(const StatePair& state) {
  const Eigen::Index m = state.grid().num_points;
  Eigen::VectorXd x(2 * m);
  x.head(m) = state.u.values.matrix();
  x.tail(m) = state.v.values.matrix();
  return x;
}

StatePair unflatten(const RadialGrid& grid, const Eigen::VectorXd& x) {
  const Eigen::Index m = grid.num_points;
  StatePair state = StatePair::zero(grid);
  state.u.values = x.head(m).array();
  state.v.values = x.tail(m).array();
  return state;
}

Eigen::VectorXd residual_flat(const StatePair& state, const Params& params) {
  const auto [ru, rv] = residual(state, params);
  const Eigen::Index m = state.grid().num_points;
  Eigen::VectorXd r(2 * m);
  r.head(m) = ru.values.matrix();
  r.tail(m) = rv.values.matrix();
  return r;
}

// d(residual)/ds = + (coupling) w Z^2 / (1+sZ)^2 per component, zero Dirichlet rows.
Eigen::VectorXd residual_s_derivative(const StatePair& state, const Params& params) {
  const Eigen::Index m = state.grid().num_points;
  const Eigen::ArrayXd Z =
      params.alpha * state.u.values.square() + params.beta * state.v.values.square();
  const Eigen::ArrayXd denom = (1.0 + params.s * Z).square();
  Eigen::VectorXd d(2 * m);
  d.head(m) = (params.alpha * state.u.values * Z.square() / denom).matrix();
  d.tail(m) = (params.beta * state.v.values * Z.square() / denom).matrix();
  d[m - 1] = 0.0;
  d[2 * m - 1] = 0.0;
  return d;
}

struct FactorizedJacobian {
  Eigen::SparseLU<SpMat> lu;
  bool factorized = false;

  void factorize(const SpMat& jac) {
    lu.compute(jac);
    factorized = (lu.info() == Eigen::Success);
  }
};

}  // namespace

void ContinuationConfig::validate() const {
  if (!(initial_amplitude > 0.0) || !(step > 0.0) || max_steps < 1 ||
      !(newton_tol > 0.0) || newton_max_iter < 1 || !(step_min > 0.0) ||
      !(step_max >= step_min))
    throw std::domain_error("ContinuationConfig: all entries must be positive and ordered");
}

Eigen::SparseMatrix<double> jacobian(const StatePair& state, const Params& params) {
  state.require_shared_grid();
  params.validate();
  const RadialGrid& grid = state.grid();
  const Eigen::Index m = grid.num_points;
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const int n = params.n;

  const Eigen::ArrayXd& u = state.u.values;
  const Eigen::ArrayXd& v = state.v.values;
  const Eigen::ArrayXd Z = params.alpha * u.square() + params.beta * v.square();
  const Eigen::ArrayXd denom = (1.0 + params.s * Z).square();
  const Eigen::ArrayXd c_uu = (params.s * params.alpha * Z.square() +
                               3.0 * params.alpha * params.alpha * u.square() +
                               params.alpha * params.beta * v.square()) / denom;
  const Eigen::ArrayXd c_vv = (params.s * params.beta * Z.square() +
                               3.0 * params.beta * params.beta * v.square() +
                               params.alpha * params.beta * u.square()) / denom;
  const Eigen::ArrayXd c_uv = 2.0 * params.alpha * params.beta * u * v / denom;

  std::vector<Triplet> trip;
  trip.reserve(std::size_t(8 * m));

  // One diagonal block of -Lap + lambda - diag(c): rows 0 .. m-2, Dirichlet row m-1.
  const auto add_block = [&](Eigen::Index row0, Eigen::Index col0, double lambda,
                             const Eigen::ArrayXd& c) {
    trip.emplace_back(row0, col0, 2.0 * double(n) * inv_h2 + lambda - c[0]);
    trip.emplace_back(row0, col0 + 1, -2.0 * double(n) * inv_h2);
    for (Eigen::Index i = 1; i + 1 < m; ++i) {
      const double drift = double(n - 1) / grid.node(i) / (2.0 * h);
      trip.emplace_back(row0 + i, col0 + i - 1, -inv_h2 + drift);
      trip.emplace_back(row0 + i, col0 + i, 2.0 * inv_h2 + lambda - c[i]);
      trip.emplace_back(row0 + i, col0 + i + 1, -inv_h2 - drift);
    }
    trip.emplace_back(row0 + m - 1, col0 + m - 1, 1.0);
  };
  const auto add_coupling = [&](Eigen::Index row0, Eigen::Index col0) {
    for (Eigen::Index i = 0; i + 1 < m; ++i)
      trip.emplace_back(row0 + i, col0 + i, -c_uv[i]);
  };

  add_block(0, 0, params.lambda1, c_uu);
  add_block(m, m, params.lambda2, c_vv);
  add_coupling(0, m);
  add_coupling(m, 0);

  SpMat jac(2 * m, 2 * m);
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

NewtonResult newton_solve(const StatePair& initial, double s, const Params& params,
                          const ContinuationConfig& cfg) {
  cfg.validate();
  Params local = params;
  local.s = s;
  local.validate();

  NewtonResult result;
  result.state = initial;
  Eigen::VectorXd r = residual_flat(result.state, local);
  result.residual_norm = r.lpNorm<Eigen::Infinity>();
  if (result.residual_norm <= cfg.newton_tol) {
    result.converged = true;
    return result;
  }

  const RadialGrid& grid = initial.grid();
  for (int it = 1; it <= cfg.newton_max_iter; ++it) {
    FactorizedJacobian solver;
    solver.factorize(jacobian(result.state, local));
    if (!solver.factorized) {
      result.near_singular = true;
      return result;
    }
    const Eigen::VectorXd delta = solver.lu.solve(-r);
    if (!delta.allFinite()) {
      result.near_singular = true;
      return result;
    }

    // Damped update: halve until the residual norm decreases.
    Eigen::VectorXd x = flatten(result.state);
    double damping = 1.0;
    bool accepted = false;
    for (int half = 0; half < 9; ++half) {
      const StatePair trial = unflatten(grid, x + damping * delta);
      const Eigen::VectorXd r_trial = residual_flat(trial, local);
      const double norm_trial = r_trial.lpNorm<Eigen::Infinity>();
      if (norm_trial < result.residual_norm) {
        result.state = trial;
        r = r_trial;
        result.residual_norm = norm_trial;
        accepted = true;
        break;
      }
      damping *= 0.5;
    }
    result.iterations = it;
    if (!accepted) return result;  // stalled
    if (result.residual_norm <= cfg.newton_tol) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

namespace {

// Inner product weighting the function part by the grid spacing, so the
// arclength scale is grid-resolution independent.
double extended_dot(double h, const Eigen::VectorXd& x1, double s1,
                    const Eigen::VectorXd& x2, double s2) {
  return h * x1.dot(x2) + s1 * s2;
}

struct ExtendedPoint {
  Eigen::VectorXd x;
  double s = 0.0;
};

struct CorrectorResult {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
};

// Newton corrector for [R(x,s); constraint] = 0 with constraint
// t_x . (x - x_ref) * h + t_s (s - s_ref) = 0, solved by block elimination
// that reuses one Jacobian factorization for both right-hand sides.
CorrectorResult bordered_corrector(ExtendedPoint& y, const ExtendedPoint& ref,
                                   const Eigen::VectorXd& t_x, double t_s,
                                   const Params& params, const RadialGrid& grid,
                                   const ContinuationConfig& cfg) {
  CorrectorResult out;
  const double h = grid.spacing();
  for (int it = 1; it <= cfg.newton_max_iter; ++it) {
    Params local = params;
    local.s = y.s;
    if (!(y.s > 0.0)) return out;
    const StatePair state = unflatten(grid, y.x);
    const Eigen::VectorXd r = residual_flat(state, local);
    const double c = extended_dot(h, t_x, t_s, y.x - ref.x, y.s - ref.s);
    out.residual_norm = r.lpNorm<Eigen::Infinity>();
    out.iterations = it - 1;
    if (out.residual_norm <= cfg.newton_tol && std::abs(c) <= cfg.newton_tol) {
      out.converged = true;
      return out;
    }

    FactorizedJacobian solver;
    solver.factorize(jacobian(state, local));
    if (!solver.factorized) return out;
    const Eigen::VectorXd a = solver.lu.solve(-r);
    const Eigen::VectorXd b = solver.lu.solve(-residual_s_derivative(state, local));
    if (!a.allFinite() || !b.allFinite()) return out;

    const double denom = extended_dot(h, t_x, t_s, b, 1.0);
    if (denom == 0.0) return out;
    const double ds = -(c + h * t_x.dot(a)) / denom;
    y.x += a + ds * b;
    y.s += ds;
  }
  return out;
}

BranchPoint make_branch_point(const StatePair& state, double s, double residual_norm,
                              const Params& params) {
  Params local = params;
  local.s = s;
  BranchPoint pt;
  pt.state = state;
  pt.s = s;
  pt.residual_norm = residual_norm;
  pt.energy = energy_Is(state, s, local);
  pt.nodal_type = {count_nodes(state.u).count, count_nodes(state.v).count};
  const Eigen::Index m = state.grid().num_points;
  pt.min_values = {state.u.values.head(m - 1).minCoeff(),
                   state.v.values.head(m - 1).minCoeff()};
  pt.norms = solution_norms(state, local);
  return pt;
}

}  // namespace

Branch continue_branch(const BifurcationPoint& origin, const Params& params,
                       const ContinuationConfig& cfg, int direction) {
  cfg.validate();
  params.validate();
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("continue_branch: direction must be +1 or -1");
  if (origin.kernel_fn.values.size() == 0)
    throw std::invalid_argument("continue_branch: origin carries no kernel function");

  Branch branch;
  branch.k = origin.k;
  branch.origin = origin;

  const RadialGrid grid = origin.kernel_fn.grid;
  const double h = grid.spacing();
  const double s_star = params.s_star_u();

  // Semitrivial state at the bifurcation point, polished on this grid.
  Params at_sk = params;
  at_sk.s = origin.s_k;
  StatePair semitrivial = StatePair::zero(grid);
  semitrivial.u = scalar_ground_state(ScalarProblem::first_of(at_sk), grid);
  {
    const NewtonResult polish = newton_solve(semitrivial, origin.s_k, params, cfg);
    if (polish.converged) semitrivial = polish.state;
  }

  // Seed corrector: pin the kernel amplitude of v, leave s free.
  const double amplitude =
      double(direction) * cfg.initial_amplitude * semitrivial.u.max_abs();
  Eigen::VectorXd phi = origin.kernel_fn.values.matrix();
  phi /= std::sqrt(h * phi.squaredNorm());

  ExtendedPoint seed;
  {
    StatePair guess = semitrivial;
    guess.v.values += amplitude * origin.kernel_fn.values;
    seed.x = flatten(guess);
    seed.s = origin.s_k;
  }
  Eigen::VectorXd t_seed = Eigen::VectorXd::Zero(2 * grid.num_points);
  t_seed.tail(grid.num_points) = phi;
  const ExtendedPoint seed_ref = seed;
  const CorrectorResult seeded =
      bordered_corrector(seed, seed_ref, t_seed, 0.0, params, grid, cfg);
  if (!seeded.converged) {
    branch.termination = "seed Newton failed to converge off the semitrivial branch";
    return branch;
  }
  branch.points.push_back(
      make_branch_point(unflatten(grid, seed.x), seed.s, seeded.residual_norm, params));

  // Initial tangent: from the semitrivial origin to the seeded point.
  ExtendedPoint prev{flatten(semitrivial), origin.s_k};
  Eigen::VectorXd t_x = seed.x - prev.x;
  double t_s = seed.s - prev.s;
  {
    const double norm = std::sqrt(extended_dot(h, t_x, t_s, t_x, t_s));
    t_x /= norm;
    t_s /= norm;
  }

  ExtendedPoint current = seed;
  double step = cfg.step;
  int easy_successes = 0;
  for (int step_index = 0; step_index < cfg.max_steps; ++step_index) {
    bool accepted = false;
    ExtendedPoint next;
    CorrectorResult corr;
    while (!accepted) {
      next.x = current.x + step * t_x;
      next.s = current.s + step * t_s;
      const ExtendedPoint predictor = next;
      corr = bordered_corrector(next, predictor, t_x, t_s, params, grid, cfg);
      if (corr.converged) {
        accepted = true;
      } else {
        step *= 0.5;
        easy_successes = 0;
        if (step < cfg.step_min) {
          branch.termination = "arclength step failure below minimum step";
          return branch;
        }
      }
    }

    if (!(next.s > 0.0) || !(next.s < s_star)) {
      branch.termination = "reached the parameter domain boundary";
      return branch;
    }
    const StatePair state = unflatten(grid, next.x);
    if (state.v.max_abs() < 10.0 * cfg.newton_tol) {
      branch.termination = "returned to the semitrivial set";
      return branch;
    }
    branch.points.push_back(make_branch_point(state, next.s, corr.residual_norm, params));

    Eigen::VectorXd new_t_x = next.x - current.x;
    double new_t_s = next.s - current.s;
    const double norm = std::sqrt(extended_dot(h, new_t_x, new_t_s, new_t_x, new_t_s));
    if (norm > 0.0) {
      t_x = new_t_x / norm;
      t_s = new_t_s / norm;
    }
    current = next;

    if (corr.iterations <= 3) {
      if (++easy_successes >= 3) {
        step = std::min(2.0 * step, cfg.step_max);
        easy_successes = 0;
      }
    } else {
      easy_successes = 0;
    }
  }
  branch.termination = "reached max_steps";
  return branch;
}

std::pair<double, double> solution_norms(const StatePair& state, const Params& params) {
  state.require_shared_grid();
  const RadialGrid& grid = state.grid();
  return {std::sqrt(h1_norm_sq(grid, params.n, state.u.values, params.lambda1)),
          std::sqrt(h1_norm_sq(grid, params.n, state.v.values, params.lambda2))};
}

}  // namespace satnls

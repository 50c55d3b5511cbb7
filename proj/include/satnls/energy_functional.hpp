#pragma once

#include <optional>
#include <span>
#include <vector>

#include "satnls/core_model.hpp"

namespace satnls {

struct Branch;

/// I_s(u,v) = (1/2)(||u||_{lambda1}^2 + ||v||_{lambda2}^2) - (1/2s^2) int g(sZ),
/// with the s = 0 analytic limit (1/4) int Z^2 for the last term.
double energy_Is(const StatePair& state, double s, const Params& params);

/// H(u,v) = I_s'(u,v)[(u,v)] = ||u||^2 + ||v||^2 - int Z^2/(1+sZ).
/// The Nehari manifold is H = 0 (away from the origin).
double nehari_H(const StatePair& state, double s, const Params& params);

/// Maximizer of the fibering map r -> I_s(sqrt(r) u, sqrt(r) v).  The map is
/// strictly concave with beta'(0) > 0; when beta' has no root the supremum is
/// +infinity and `bounded` is false.
struct FiberingResult {
  bool bounded = false;
  double r_star = 0.0;    // valid when bounded
  double sup_value = 0.0; // +inf reported via bounded = false
};
FiberingResult fibering_maximize(const StatePair& state, double s, const Params& params);

/// Energies of the scalar semitrivial solutions at this s, where they exist,
/// and their minimum c_s^*.  Throws std::domain_error when neither scalar
/// state exists (s >= max{alpha/lambda1, beta/lambda2}).
struct SemitrivialLevels {
  std::optional<double> level_u;
  std::optional<double> level_v;
  double c_s_star = 0.0;
};
SemitrivialLevels semitrivial_levels(const Params& params, const RadialGrid& grid);

struct EnergyCandidate {
  int branch_k = 0;
  int point_index = 0;
  double s = 0.0;
  double energy = 0.0;
  double margin = 0.0;  // energy - c_s^*(s)
  bool violation = false;
};

/// Numerical check that no computed fully nontrivial solution dips below the
/// semitrivial level: margins of every branch point against c_s^* at its own s.
/// For symmetric parameters the degenerate theta-family is reported instead.
struct EnergyReport {
  double c_s_star = 0.0;  // at params.s (reference value)
  bool symmetric_case = false;
  double theta_spread = 0.0;  // max energy spread over the theta family (symmetric case)
  double tol = 0.0;
  std::vector<EnergyCandidate> candidates;
  int violations = 0;
};
EnergyReport verify_semitrivial_groundstate(std::span<const Branch> branches,
                                            const Params& params, const RadialGrid& grid,
                                            double tol = -1.0);

}  // namespace satnls

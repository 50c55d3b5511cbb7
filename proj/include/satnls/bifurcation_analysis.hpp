#pragma once

#include <optional>
#include <vector>

#include "satnls/core_model.hpp"
#include "satnls/linearized_spectrum.hpp"

namespace satnls {

/// Root s_k of mu_k(s) = 1 on the semitrivial branch, with the eigenfunction
/// spanning the kernel of Id - L(s_k) and the sign-change bracket it was
/// refined from.
struct BifurcationPoint {
  int k = 0;
  double s_k = 0.0;
  RadialProfile kernel_fn;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double mu_residual = 0.0;  // |mu_k(s_k) - 1| at the accepted root
};

enum class PositivityKind { SymmetricFamily, Bound, NoPositive };

/// Outcome of the positivity constraint: either the symmetric one-parameter
/// family exists, or positive solutions are confined to s below the stated
/// bound, or no positive solutions exist for any s.
struct PositivityVerdict {
  PositivityKind kind = PositivityKind::NoPositive;
  std::optional<double> bound;
};

/// Scan result: every detected crossing (possibly several per k; the curves
/// are not known to be monotone) plus the list of k without any crossing on
/// the scanned grid.
struct BifurcationScan {
  std::vector<BifurcationPoint> points;
  std::vector<int> ks_without_crossing;
};

/// 200 logarithmically spaced s values in (0.01, 0.99) * alpha/lambda1.
std::vector<double> default_s_grid(const Params& params, int count = 200);

/// Locates bifurcation points for k in [k_lo, k_hi] by scanning mu_k(s) - 1
/// over s_grid for sign changes and refining each by bisection to tol.
/// Requires the hypothesis lambda2/lambda1 < beta/alpha; refuses otherwise.
BifurcationScan find_bifurcation_points(const Params& params, int k_lo, int k_hi,
                                        const std::vector<double>& s_grid, double tol,
                                        const RadialGrid& grid);

/// n in {2,3}:  lambda2/lambda1 < beta/alpha < (lambda2/lambda1)^{(4-n)/4}.
bool check_corollary1(const Params& params);

/// n = 1:  lambda2/lambda1 < beta/alpha
///         < (1/2)(sqrt(lambda2/lambda1)+2k0)(sqrt(lambda2/lambda1)+2k0+1).
bool check_corollary2(const Params& params, int k0);

PositivityVerdict positivity_constraint(const Params& params);

struct NodeCount {
  int count = 0;
  bool effectively_zero = false;  // every node below the tail threshold
};

/// Strict sign changes of the profile over nodes whose magnitude exceeds
/// tail_threshold * max|values|; suppresses truncation noise in the tails.
NodeCount count_nodes(const RadialProfile& profile, double tail_threshold = 1e-6);

}  // namespace satnls

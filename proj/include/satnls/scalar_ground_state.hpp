#pragma once

#include "satnls/core_model.hpp"

namespace satnls {

/// Scalar problem  -Lap w + lambda w = coupling^2 w^3 / (1 + s * coupling * w^2)
/// in dimension n.  It is the first equation of the system with v = 0 when
/// (lambda, coupling) = (lambda1, alpha), and the second with u = 0 when
/// (lambda, coupling) = (lambda2, beta).
struct ScalarProblem {
  double lambda = 1.0;
  double coupling = 1.0;
  double s = 0.0;
  int n = 1;

  double s_max() const { return coupling / lambda; }

  /// Positivity of the constants, n in {1,2,3} and s inside [0, coupling/lambda).
  /// s = 0 is admitted as the analytic limit problem.
  void validate() const;

  static ScalarProblem first_of(const Params& p) { return {p.lambda1, p.alpha, p.s, p.n}; }
  static ScalarProblem second_of(const Params& p) { return {p.lambda2, p.beta, p.s, p.n}; }
};

/// Peak amplitude w(0) of the one-dimensional scalar ground state: the unique
/// positive root a of  lambda a^2 - s^{-2} g(s * coupling * a^2) = 0
/// (for s = 0 the analytic limit root sqrt(2 lambda)/coupling).
/// Bracketing plus bisection to relative tolerance 1e-12.
double peak_amplitude_1d(const ScalarProblem& prob);

/// One-dimensional scalar ground state by inverse-function quadrature:
/// x(z) = int_z^{w(0)} (lambda y^2 - s^{-2} g(s c y^2))^{-1/2} dy, inverted
/// monotonically onto the grid.  The square-root endpoint singularity at the
/// peak is removed by the substitution y = w(0)(1 - t^2) and the flat tail is
/// integrated in the logarithmic variable y = (w(0)/2) e^{-w}.
RadialProfile ground_state_1d(const ScalarProblem& prob, const RadialGrid& grid);

/// Radial scalar ground state for n = 2, 3 by shooting on w(0):
/// bisection between "profile crosses zero" (overshoot) and "profile turns
/// upward" (undershoot), integrating with an adaptive Dormand-Prince step.
/// Beyond the radius where the trajectory leaves the separatrix the profile is
/// continued by the matched decaying far-field r^{1-n/2} K_{n/2-1}(sqrt(lambda) r).
RadialProfile ground_state_radial(const ScalarProblem& prob, const RadialGrid& grid);

/// Dispatch on the dimension: quadrature inversion in n = 1, shooting otherwise.
RadialProfile scalar_ground_state(const ScalarProblem& prob, const RadialGrid& grid);

}  // namespace satnls

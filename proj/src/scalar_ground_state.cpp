#include "satnls/scalar_ground_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "satnls/core_model.hpp"

namespace satnls {
namespace {

// 7-point Gauss-Legendre rule on [-1, 1].
constexpr double kGx[7] = {-0.949107912342758524526189684047851,
                           -0.741531185599394439863864773280788,
                           -0.405845151377397166906606412076961,
                           0.0,
                           0.405845151377397166906606412076961,
                           0.741531185599394439863864773280788,
                           0.949107912342758524526189684047851};
constexpr double kGw[7] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327,
                           0.381830050505118944950369775488975,
                           0.279705391489276667901467771423780,
                           0.129484966168869693270611432679082};

template <typename F>
double gauss7(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int j = 0; j < 7; ++j) acc += kGw[j] * f(c + half * kGx[j]);
  return acc * half;
}

// Stable evaluation of Q(y) = lambda y^2 - s^{-2} g(s c y^2) and of the
// peak-factored variant Q(a(1-t^2)) / t^2.  Near the peak the direct formula
// cancels; there we use the peak identity lambda a^2 = s^{-2} g(s c a^2) and a
// Taylor expansion of tau g(sigma) - g(sigma tau) around tau = 1.
struct PeakKernel {
  double lambda, coupling, s, a;
  double sigma = 0.0;  // s * coupling * a^2
  double m = 0.0, c2 = 0.0, c3 = 0.0;

  PeakKernel(const ScalarProblem& prob, double peak)
      : lambda(prob.lambda), coupling(prob.coupling), s(prob.s), a(peak) {
    if (s > 0.0) {
      sigma = s * coupling * a * a;
      const double q = sigma / (1.0 + sigma);
      m = std::log1p(sigma) - q;
      c2 = q * q;
      c3 = q * q * q;
    }
  }

  double Q(double y) const {
    const double y2 = y * y;
    if (s == 0.0) return lambda * y2 - 0.5 * coupling * coupling * y2 * y2;
    return lambda * y2 - saturation_g(s * coupling * y2) / (s * s);
  }

  // Q(a(1-t^2)) / t^2 for t in [0, sqrt(1/2)].
  double Q_hat(double t) const {
    const double t2 = t * t;
    const double omt2 = 1.0 - t2;
    const double e = t2 * (2.0 - t2);  // 1 - (1-t^2)^2
    if (s == 0.0) return lambda * a * a * omt2 * omt2 * (2.0 - t2);
    if (e < 1e-3) {
      // tau g(sigma) - g(sigma tau) = m e - c2 e^2/2 - c3 e^3/3 + O(e^4)
      return (2.0 - t2) * (m - 0.5 * c2 * e - c3 * e * e / 3.0) / (s * s);
    }
    const double tau = omt2 * omt2;
    const double D = tau * saturation_g(sigma) - saturation_g(sigma * tau);
    return D / (s * s * t2);
  }

  // Integrand of x(t) = int_0^t 2 a / sqrt(Q_hat) in the peak region.
  double peak_integrand(double t) const { return 2.0 * a / std::sqrt(Q_hat(t)); }

  // Integrand of x in the tail region, y = (a/2) e^{-w}.
  double tail_integrand(double w) const {
    const double y = 0.5 * a * std::exp(-w);
    return y / std::sqrt(Q(y));
  }
};

// Monotone cumulative table with safeguarded-Newton inversion.
struct CumulativeTable {
  std::vector<double> arg;  // increasing
  std::vector<double> val;  // increasing, val[0] = offset

  template <typename F>
  void build(const F& f, double x0, double dx, std::size_t cells, double offset) {
    arg.resize(cells + 1);
    val.resize(cells + 1);
    arg[0] = x0;
    val[0] = offset;
    for (std::size_t j = 0; j < cells; ++j) {
      arg[j + 1] = x0 + double(j + 1) * dx;
      val[j + 1] = val[j] + gauss7(f, arg[j], arg[j + 1]);
    }
  }

  template <typename F>
  void extend(const F& f, double dx, std::size_t cells) {
    const std::size_t old = arg.size();
    arg.resize(old + cells);
    val.resize(old + cells);
    for (std::size_t j = old; j < arg.size(); ++j) {
      arg[j] = arg[j - 1] + dx;
      val[j] = val[j - 1] + gauss7(f, arg[j - 1], arg[j]);
    }
  }

  double back() const { return val.back(); }

  // Solves val(x) = target for x; f is the integrand (the derivative of val).
  // Safeguarded Newton driven to the rounding floor of the cumulative sum, so
  // the inverted profile is smooth at machine precision (second differences of
  // the result are taken later and would amplify any slack by 1/h^2).
  template <typename F>
  double invert(const F& f, double target, std::size_t& hint) const {
    while (hint + 1 < val.size() && val[hint + 1] < target) ++hint;
    const std::size_t j = hint;
    double lo = arg[j], hi = arg[j + 1];
    double flo = val[j] - target, fhi = val[j + 1] - target;
    if (flo > 0.0) return lo;  // target at or before the cell start
    double x = lo + (hi - lo) * (-flo) / (fhi - flo);
    for (int it = 0; it < 60; ++it) {
      const double fx = val[j] + gauss7(f, arg[j], x) - target;
      if (std::abs(fx) <= 4e-16 * (1.0 + std::abs(target))) return x;
      if (fx > 0.0) hi = x; else lo = x;
      if (hi - lo <= 1e-16 * (std::abs(hi) + 1e-30)) return 0.5 * (lo + hi);
      const double d = f(x);
      double xn = x - fx / d;
      if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
      x = xn;
    }
    return x;
  }
};

}  // namespace

void ScalarProblem::validate() const {
  if (!(lambda > 0.0) || !(coupling > 0.0))
    throw std::domain_error("ScalarProblem: lambda and coupling must be positive");
  if (n < 1 || n > 3)
    throw std::domain_error("ScalarProblem: dimension n must be 1, 2 or 3");
  if (!(s >= 0.0) || s >= s_max()) {
    std::ostringstream msg;
    msg << "ScalarProblem: saturation s = " << s
        << " outside the existence window 0 <= s < coupling/lambda = " << s_max();
    throw std::domain_error(msg.str());
  }
}

double peak_amplitude_1d(const ScalarProblem& prob) {
  prob.validate();
  if (prob.n != 1)
    throw std::domain_error("peak_amplitude_1d: defined for n = 1 only");
  const double lambda = prob.lambda, c = prob.coupling, s = prob.s;
  if (s == 0.0) return std::sqrt(2.0 * lambda) / c;

  // Work in t = a^2: psi(t) = lambda t - s^{-2} g(s c t), psi > 0 near 0.
  const auto psi = [&](double t) { return lambda * t - saturation_g(s * c * t) / (s * s); };
  double hi = 2.0 * lambda / (c * c);
  int doublings = 0;
  while (psi(hi) > 0.0) {
    hi *= 2.0;
    if (++doublings > 200)
      throw std::domain_error("peak_amplitude_1d: no root found (s too close to the window end?)");
  }
  double lo = hi / 2.0;
  while (psi(lo) <= 0.0) lo /= 2.0;  // ensure a genuine bracket
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

RadialProfile ground_state_1d(const ScalarProblem& prob, const RadialGrid& grid) {
  prob.validate();
  grid.validate();
  if (prob.n != 1)
    throw std::domain_error("ground_state_1d: defined for n = 1 only");

  const double a = peak_amplitude_1d(prob);
  const PeakKernel kernel(prob, a);

  const auto peak_f = [&kernel](double t) { return kernel.peak_integrand(t); };
  const auto tail_f = [&kernel](double w) { return kernel.tail_integrand(w); };

  // Peak region: y from a down to a/2, parametrized by y = a(1 - t^2).
  const double t_half = std::sqrt(0.5);
  CumulativeTable peak_table;
  peak_table.build(peak_f, 0.0, t_half / 600.0, 600, 0.0);
  const double x_half = peak_table.back();

  // Tail region: y = (a/2) e^{-w}; dX/dw tends to 1/sqrt(lambda).
  CumulativeTable tail_table;
  const double dw = 0.02;
  const double w_guess = std::sqrt(prob.lambda) * std::max(grid.r_max - x_half, 1.0) + 5.0;
  tail_table.build(tail_f, 0.0, dw, std::size_t(w_guess / dw) + 2, x_half);
  while (tail_table.back() <= grid.r_max && tail_table.arg.size() < 400000)
    tail_table.extend(tail_f, dw, 1024);

  Eigen::ArrayXd values(grid.num_points);
  values[0] = a;
  std::size_t hint_peak = 0, hint_tail = 0;
  for (Eigen::Index i = 1; i < grid.num_points; ++i) {
    const double r = grid.node(i);
    if (r <= x_half) {
      const double t = peak_table.invert(peak_f, r, hint_peak);
      values[i] = a * (1.0 - t * t);
    } else {
      const double w = tail_table.invert(tail_f, r, hint_tail);
      values[i] = 0.5 * a * std::exp(-w);
    }
  }
  return RadialProfile(grid, std::move(values));
}

namespace {

// Dormand-Prince 5(4) step for the radial shooting ODE.
struct ShootOde {
  double lambda, coupling, s;
  int n;

  void rhs(double r, const double y[2], double dy[2]) const {
    const double u = y[0], p = y[1];
    const double cu2 = coupling * u * u;
    const double f = coupling * cu2 * u / (1.0 + s * cu2);
    dy[0] = p;
    dy[1] = lambda * u - f - double(n - 1) / r * p;
  }
};

struct DormandPrince {
  const ShootOde& ode;
  double rtol = 1e-12, atol = 1e-14;

  // One accepted adaptive step from (r, y); h is updated in place.
  void step(double& r, double y[2], double& h) const {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2], y5[2];
    ode.rhs(r, y, k1);
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
      ode.rhs(r + h / 5.0, yt, k2);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      ode.rhs(r + 3.0 * h / 10.0, yt, k3);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ode.rhs(r + 4.0 * h / 5.0, yt, k4);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ode.rhs(r + 8.0 * h / 9.0, yt, k5);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      ode.rhs(r + h, yt, k6);
      for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ode.rhs(r + h, y5, k7);

      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (err <= 1.0) {
        r += h;
        y[0] = y5[0];
        y[1] = y5[1];
        const double grow = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
        h *= std::min(5.0, std::max(0.2, grow));
        return;
      }
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
    throw std::runtime_error("ground_state_radial: adaptive step failed to converge");
  }
};

enum class Shot { Over, Under, Exhausted };

// Radius out to which a shot must be integrated before it can be classified.
// Near s -> coupling/lambda the nonlinearity saturates and large-amplitude
// trajectories oscillate at frequency omega = sqrt(coupling/s - lambda), so
// the first zero crossing sits near pi/omega and can lie far beyond the grid.
double classification_radius(const ShootOde& ode, double r_max) {
  double scale = 1.0 / std::sqrt(ode.lambda);
  if (ode.s > 0.0) {
    const double omega_sq = ode.coupling / ode.s - ode.lambda;
    scale = std::max(scale, 1.0 / std::sqrt(omega_sq));
  }
  return r_max + 8.0 * scale;
}

Shot classify_shot(const ShootOde& ode, double a, double r_end) {
  const double ell = 1.0 / std::sqrt(ode.lambda);
  double r = 1e-6 * ell;
  const double cu2 = ode.coupling * a * a;
  const double G = ode.lambda * a - ode.coupling * cu2 * a / (1.0 + ode.s * cu2);
  double y[2] = {a + G * r * r / (2.0 * double(ode.n)), G * r / double(ode.n)};
  double h = 1e-4 * ell;
  DormandPrince stepper{ode};
  const double under_floor = 1e-10 * std::max(1.0, a);
  while (r < r_end) {
    h = std::min(h, r_end - r);
    stepper.step(r, y, h);
    if (y[0] <= 0.0) return Shot::Over;
    if (y[1] > 0.0 && y[0] > under_floor) return Shot::Under;
  }
  return Shot::Exhausted;
}

}  // namespace

RadialProfile ground_state_radial(const ScalarProblem& prob, const RadialGrid& grid) {
  prob.validate();
  grid.validate();
  if (prob.n < 2)
    throw std::domain_error("ground_state_radial: defined for n = 2, 3 (use ground_state_1d)");

  const ShootOde ode{prob.lambda, prob.coupling, prob.s, prob.n};
  const double denom = prob.coupling * prob.coupling - prob.lambda * prob.coupling * prob.s;
  const double a_min = std::sqrt(prob.lambda / denom);  // where lambda a = f(a)
  const double r_classify = classification_radius(ode, grid.r_max);

  double lo = 1.000001 * a_min;
  if (classify_shot(ode, lo, r_classify) == Shot::Over)
    throw std::runtime_error("ground_state_radial: lower shooting amplitude already overshoots");
  double hi = 2.0 * lo;
  int doublings = 0;
  while (classify_shot(ode, hi, r_classify) != Shot::Over) {
    hi *= 2.0;
    if (++doublings > 40) {
      std::ostringstream msg;
      msg << "ground_state_radial: no overshoot bracket found in u(0) range [" << lo << ", "
          << hi << "]";
      throw std::runtime_error(msg.str());
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Shot kind = classify_shot(ode, mid, r_classify);
    if (kind == Shot::Exhausted) break;
    (kind == Shot::Over ? hi : lo) = mid;
  }
  const double a = 0.5 * (lo + hi);

  // Final sweep: record node values until the trajectory leaves the separatrix,
  // then continue with the decaying linear far field.
  Eigen::ArrayXd values = Eigen::ArrayXd::Zero(grid.num_points);
  values[0] = a;
  const double ell = 1.0 / std::sqrt(prob.lambda);
  double r = 1e-6 * ell;
  const double cu2 = prob.coupling * a * a;
  const double G = prob.lambda * a - prob.coupling * cu2 * a / (1.0 + prob.s * cu2);
  double y[2] = {a + G * r * r / (2.0 * double(prob.n)), G * r / double(prob.n)};
  double h = 1e-4 * ell;
  DormandPrince stepper{ode};
  const double graft_level = 1e-3 * a;
  Eigen::Index last_good = 0;
  for (Eigen::Index i = 1; i < grid.num_points; ++i) {
    const double target = grid.node(i);
    bool bad = false;
    while (r < target) {
      h = std::min(h, target - r);
      stepper.step(r, y, h);
      if (y[0] <= graft_level || y[1] >= 0.0) {
        bad = true;
        break;
      }
    }
    if (bad) break;
    values[i] = y[0];
    last_good = i;
  }

  if (last_good + 1 < grid.num_points) {
    const double u_m = values[last_good];
    const double r_m = grid.node(last_good);
    if (u_m > 0.05 * a || last_good == 0)
      throw std::runtime_error("ground_state_radial: trajectory left the separatrix early");
    const double root_lambda = std::sqrt(prob.lambda);
    for (Eigen::Index i = last_good + 1; i < grid.num_points; ++i) {
      const double ri = grid.node(i);
      if (prob.n == 3) {
        values[i] = u_m * (r_m / ri) * std::exp(-root_lambda * (ri - r_m));
      } else {  // n == 2: K_0 ratio, with the asymptotic form for large arguments
        const double xm = root_lambda * r_m, xi = root_lambda * ri;
        if (xi < 600.0)
          values[i] = u_m * std::cyl_bessel_k(0.0, xi) / std::cyl_bessel_k(0.0, xm);
        else
          values[i] = u_m * std::sqrt(xm / xi) * std::exp(-(xi - xm));
      }
    }
  }
  return RadialProfile(grid, std::move(values));
}

RadialProfile scalar_ground_state(const ScalarProblem& prob, const RadialGrid& grid) {
  return prob.n == 1 ? ground_state_1d(prob, grid) : ground_state_radial(prob, grid);
}

}  // namespace satnls

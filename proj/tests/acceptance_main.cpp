// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.  The first program argument
// must be the path of the CLI binary (used by the determinism criterion).
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "satnls/bifurcation_analysis.hpp"
#include "satnls/branch_continuation.hpp"
#include "satnls/energy_functional.hpp"
#include "satnls/io.hpp"
#include "satnls/linearized_spectrum.hpp"
#include "satnls/quadrature.hpp"
#include "satnls/scalar_ground_state.hpp"

using namespace satnls;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(int id, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(id, name, pass, detail);
  } catch (const std::exception& err) {
    report(id, name, false, std::string("exception: ") + err.what());
  }
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

const Params kCy{1.0, 0.25, 1.0, 1.0, 0.0, 1};  // Champneys-Yang setting

// Shared Champneys-Yang scan and branches (criteria 5, 6 and 9).
struct CyData {
  BifurcationScan scan;
  std::vector<Branch> branches;  // k = 1..3, +1 direction
  RadialGrid grid{30.0, 3000};
  RadialGrid branch_grid{30.0, 1500};
};

const CyData& cy_data() {
  static const CyData data = [] {
    CyData d;
    std::vector<double> s_grid(250);
    const double lo = std::log(0.01), hi = std::log(0.995);
    for (int i = 0; i < 250; ++i)
      s_grid[i] = std::exp(lo + (hi - lo) * i / 249.0);
    d.scan = find_bifurcation_points(kCy, 0, 5, s_grid, 1e-9, d.grid);

    BifurcationScan seeds = find_bifurcation_points(kCy, 1, 3, default_s_grid(kCy, 120),
                                                    1e-9, d.branch_grid);
    ContinuationConfig cfg;
    cfg.max_steps = 40;
    std::vector<bool> seeded(4, false);
    for (const BifurcationPoint& point : seeds.points) {
      if (point.k < 1 || point.k > 3 || seeded[point.k]) continue;
      seeded[point.k] = true;
      d.branches.push_back(continue_branch(point, kCy, cfg, +1));
    }
    return d;
  }();
  return data;
}

std::pair<bool, std::string> criterion1() {
  RadialGrid grid{15.0, 4000};
  const RadialProfile u = ground_state_1d({1.0, 1.0, 0.0, 1}, grid);
  double err = 0.0;
  for (Eigen::Index i = 0; i < grid.num_points; ++i)
    err = std::max(err, std::abs(u.values[i] - std::sqrt(2.0) / std::cosh(grid.node(i))));
  return {err <= 1e-6, fmt("sup error %.3e (tolerance 1e-6)", err)};
}

std::pair<bool, std::string> criterion2() {
  const double t_root = oracles::bisect(
      [](double t) { return 4.0 * std::log1p(0.5 * t) - t; }, 1.0, 100.0);
  const double oracle = std::sqrt(t_root);
  const double a = peak_amplitude_1d({1.0, 1.0, 0.5, 1});
  const double rel = std::abs(a - oracle) / oracle;
  return {rel <= 1e-10, fmt("a = %.12f vs oracle %.12f, rel %.2e", a, oracle, rel)};
}

std::pair<bool, std::string> criterion3() {
  const auto spectrum_errors = [](Eigen::Index points) {
    RadialGrid grid{15.0, points};
    const RadialProfile u0 = ground_state_1d({1.0, 1.0, 0.0, 1}, grid);
    const Spectrum spec = eigenvalues_L(potential_Ws(u0, kCy), 0.25, 1, 3);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double exact = 2.0 / ((0.5 + 2.0 * k) * (0.5 + 2.0 * k + 1.0));
      worst = std::max(worst, std::abs(spec.eigenvalues[k] - exact) / exact);
    }
    return worst;
  };
  const double coarse = spectrum_errors(4000);
  const double fine = spectrum_errors(7999);  // halves the grid spacing
  const bool pass = coarse <= 1e-3 && coarse / fine >= 3.0;
  return {pass, fmt("rel error %.3e at 4000 pts (tol 1e-3), halving gain %.2fx (need 3x)",
                    coarse, coarse / fine)};
}

std::pair<bool, std::string> criterion4() {
  RadialGrid grid{30.0, 6000};
  double previous = -1.0;
  bool monotone = true;
  double final_rel = 0.0;
  for (double s : {0.95, 0.97, 0.99}) {
    Params p = kCy;
    p.s = s;
    const RadialProfile us = ground_state_1d(ScalarProblem::first_of(p), grid);
    const double mu0 = eigenvalues_L(potential_Ws(us, p), 0.25, 1, 1).eigenvalues[0];
    if (previous > 0.0 && mu0 <= previous) monotone = false;
    previous = mu0;
    final_rel = std::abs(mu0 - 4.0) / 4.0;
  }
  return {monotone && final_rel <= 0.05,
          fmt("mu_0 trend monotone=%d, |mu_0(0.99)-4|/4 = %.3f (tol 0.05)", int(monotone),
              final_rel)};
}

std::pair<bool, std::string> criterion5() {
  const CyData& d = cy_data();
  double s_prev = 0.0;
  bool increasing = true;
  double s5 = 0.0;
  int found = 0;
  for (int k = 1; k <= 5; ++k) {
    double s_k = -1.0;
    for (const BifurcationPoint& p : d.scan.points)
      if (p.k == k) {
        s_k = p.s_k;
        break;  // first crossing per k
      }
    if (s_k < 0.0) continue;
    ++found;
    if (s_k <= s_prev) increasing = false;
    s_prev = s_k;
    if (k == 5) s5 = s_k;
  }
  bool k0_empty = false;
  for (int k : d.scan.ks_without_crossing)
    if (k == 0) k0_empty = true;
  const bool pass = found == 5 && increasing && s5 > 0.9 && k0_empty;
  return {pass, fmt("found %d/5 roots, increasing=%d, s_5 = %.4f (> 0.9), k=0 empty=%d",
                    found, int(increasing), s5, int(k0_empty))};
}

std::pair<bool, std::string> criterion6() {
  const CyData& d = cy_data();
  if (d.branches.size() < 3) return {false, "fewer than 3 branches were traced"};
  bool pass = true;
  std::string detail;
  for (const Branch& branch : d.branches) {
    const int check_count = std::min<std::size_t>(5, branch.points.size());
    if (check_count < 5) pass = false;
    for (int i = 0; i < check_count; ++i) {
      const auto [nu, nv] = branch.points[i].nodal_type;
      if (nu != 0 || nv != branch.k) pass = false;
    }
    detail += fmt("k=%d:%zupts ", branch.k, branch.points.size());
  }
  return {pass, detail + "(first 5 points of each are (0,k)-nodal)"};
}

std::pair<bool, std::string> criterion7() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> amp(0.2, 1.5), width(0.5, 2.5), freq(0.3, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = (trial % 2 == 0) ? 1 : 3;
    Params p{1.0, 0.5, 1.2, 0.8, 0.45, n};
    RadialGrid grid{10.0, 200};
    const Eigen::ArrayXd r = grid.nodes();
    StatePair st = StatePair::zero(grid);
    st.u.values = amp(rng) * (-r.square() / width(rng)).exp() * (1.0 + 0.3 * (freq(rng) * r).cos());
    st.v.values = amp(rng) * (-r.square() / width(rng)).exp() * (1.0 + 0.3 * (freq(rng) * r).sin());

    Eigen::VectorXd d(2 * grid.num_points);
    d.head(grid.num_points) = (amp(rng) * (-r.square() / width(rng)).exp()).matrix();
    d.tail(grid.num_points) = (amp(rng) * (-r.square() / width(rng)).exp() * (freq(rng) * r).cos()).matrix();
    d /= d.norm();

    const double delta = 1e-5;
    const auto stack = [&](const StatePair& state) {
      const auto [ru, rv] = residual(state, p);
      Eigen::VectorXd out(2 * grid.num_points);
      out.head(grid.num_points) = ru.values.matrix();
      out.tail(grid.num_points) = rv.values.matrix();
      return out;
    };
    StatePair plus = st, minus = st;
    plus.u.values += delta * d.head(grid.num_points).array();
    plus.v.values += delta * d.tail(grid.num_points).array();
    minus.u.values -= delta * d.head(grid.num_points).array();
    minus.v.values -= delta * d.tail(grid.num_points).array();
    const Eigen::VectorXd fd = (stack(plus) - stack(minus)) / (2.0 * delta);
    const Eigen::VectorXd an = jacobian(st, p) * d;
    worst = std::max(worst, (an - fd).norm() / fd.norm());
  }
  return {worst <= 1e-6, fmt("worst relative error %.3e over 10 states (tol 1e-6)", worst)};
}

std::pair<bool, std::string> criterion8() {
  const Params p{1.0, 0.5, 1.0, 0.7, 0.0, 3};  // check_corollary1 holds, positivity bound = 0.6
  if (!check_corollary1(p)) return {false, "check_corollary1 unexpectedly fails"};
  const PositivityVerdict verdict = positivity_constraint(p);
  if (verdict.kind != PositivityKind::Bound || !verdict.bound)
    return {false, "positivity constraint did not yield a bound"};
  const double bound = *verdict.bound;

  const RadialGrid grid = RadialGrid::for_params(p, 1500);
  std::vector<double> s_grid(50);
  const double lo = std::log(0.01), hi = std::log(0.99);
  for (int i = 0; i < 50; ++i) s_grid[i] = std::exp(lo + (hi - lo) * i / 49.0);
  const BifurcationScan scan = find_bifurcation_points(p, 0, 0, s_grid, 1e-9, grid);
  if (scan.points.empty()) return {false, "no k = 0 bifurcation point detected"};

  ContinuationConfig cfg;
  cfg.max_steps = 150;
  int positive_count = 0;
  double max_s_positive = 0.0;
  for (int direction : {+1, -1}) {
    const Branch branch = continue_branch(scan.points.front(), p, cfg, direction);
    for (const BranchPoint& pt : branch.points) {
      if (pt.min_values.first > 0.0 && pt.min_values.second > 0.0) {
        ++positive_count;
        max_s_positive = std::max(max_s_positive, pt.s);
      }
    }
  }
  const bool pass = positive_count > 0 && max_s_positive <= bound + 1e-3;
  return {pass, fmt("s_0 = %.4f, %d positive points, max s = %.4f <= %.4f + 1e-3",
                    scan.points.front().s_k, positive_count, max_s_positive, bound)};
}

std::pair<bool, std::string> criterion9() {
  const CyData& d = cy_data();
  const EnergyReport report =
      verify_semitrivial_groundstate(d.branches, kCy, d.branch_grid);
  int candidates = int(report.candidates.size());

  Params sym{1.0, 1.0, 1.0, 1.0, 0.5, 1};
  const EnergyReport sym_report =
      verify_semitrivial_groundstate({}, sym, RadialGrid{20.0, 2500});
  const bool pass = report.violations == 0 && candidates > 0 && sym_report.symmetric_case &&
                    sym_report.theta_spread <= 1e-8;
  return {pass, fmt("%d candidates, %d violations (tol %.2e); theta spread %.2e (tol 1e-8)",
                    candidates, report.violations, report.tol, sym_report.theta_spread)};
}

std::pair<bool, std::string> criterion10() {
  RadialGrid grid{120.0, 6001};
  double previous = 1e9;
  bool monotone = true;
  double final_dist = 0.0;
  for (double eps : {0.1, 0.05, 0.01}) {
    const double mu = box_potential_eigen(1.0, 1.0, eps, 0, 1, grid);
    const double dist = std::abs(mu - 1.0);
    if (dist >= previous) monotone = false;
    previous = dist;
    final_dist = dist;
  }
  const bool pass = monotone && final_dist <= 0.05;
  return {pass,
          fmt("distance sequence monotone=%d, |mu(0.01) - 1| = %.4f (tol 0.05)",
              int(monotone), final_dist)};
}

std::pair<bool, std::string> criterion11() {
  RadialGrid grid{20.0, 1200};
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> amp(0.3, 2.0), width(1.0, 3.0);
  int checked = 0;
  double worst = 0.0;
  while (checked < 50) {
    StatePair st = StatePair::zero(grid);
    st.u.values = amp(rng) * (-grid.nodes().square() / width(rng)).exp();
    st.v.values = amp(rng) * (-grid.nodes().square() / width(rng)).exp();
    const FiberingResult fib = fibering_maximize(st, 0.5, kCy);
    if (!fib.bounded) continue;
    StatePair rescaled = st;
    rescaled.u.values *= std::sqrt(fib.r_star);
    rescaled.v.values *= std::sqrt(fib.r_star);
    const auto [nu, nv] = solution_norms(rescaled, kCy);
    worst = std::max(worst,
                     std::abs(nehari_H(rescaled, 0.5, kCy)) / (nu * nu + nv * nv));
    ++checked;
  }
  return {worst <= 1e-8, fmt("worst |H|/||.||^2 = %.3e over 50 states (tol 1e-8)", worst)};
}

std::pair<bool, std::string> criterion12(const std::string& cli_path) {
  if (cli_path.empty()) return {false, "CLI path not supplied as argv[1]"};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path out1 = dir / "satnls_det_1.csv";
  const fs::path out2 = dir / "satnls_det_2.csv";
  const std::string base =
      "\"" + cli_path +
      "\" eigencurves --lambda1 1 --lambda2 0.25 --alpha 1 --beta 1 --n 1 --rmax 30 "
      "--points 800 --kmax 3 --smin 0.1 --smax 0.8 --scount 5 --out ";
  if (std::system((base + out1.string()).c_str()) != 0)
    return {false, "first CLI run failed"};
  if (std::system((base + out2.string()).c_str()) != 0)
    return {false, "second CLI run failed"};
  std::ifstream f1(out1, std::ios::binary), f2(out2, std::ios::binary);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  const bool identical = s1.str() == s2.str() && !s1.str().empty();
  fs::remove(out1);
  fs::remove(out2);
  return {identical, identical ? "byte-identical CSV output" : "outputs differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";

  run_criterion(1, "closed-form ground state", criterion1);
  run_criterion(2, "peak-amplitude oracle", criterion2);
  run_criterion(3, "closed-form spectrum", criterion3);
  run_criterion(4, "saturation limit of mu_0", criterion4);
  run_criterion(5, "bifurcation accumulation", criterion5);
  run_criterion(6, "nodal classification", criterion6);
  run_criterion(7, "jacobian correctness", criterion7);
  run_criterion(8, "positivity bound on C_0", criterion8);
  run_criterion(9, "semitrivial ground states", criterion9);
  run_criterion(10, "box-potential oracle", criterion10);
  run_criterion(11, "fibering/Nehari consistency", criterion11);
  run_criterion(12, "CLI determinism", [&] { return criterion12(cli_path); });

  if (g_failures == 0) {
    std::printf("all 12 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}

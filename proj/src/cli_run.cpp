#include "satnls/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "satnls/bifurcation_analysis.hpp"
#include "satnls/branch_continuation.hpp"
#include "satnls/energy_functional.hpp"
#include "satnls/linearized_spectrum.hpp"
#include "satnls/scalar_ground_state.hpp"

namespace satnls {

using nlohmann::json;

namespace {

RadialGrid make_grid(const RunConfig& config) {
  if (config.r_max <= 0.0) return RadialGrid::for_params(config.params, config.points);
  if (config.command != Command::BoxOracle) {
    const double floor = RadialGrid::min_r_max(config.params);
    if (config.r_max < floor) {
      std::ostringstream msg;
      msg << "grid: r_max = " << config.r_max
          << " is below the decay-margin requirement " << floor;
      throw std::domain_error(msg.str());
    }
  }
  RadialGrid grid{config.r_max, config.points};
  grid.validate();
  return grid;
}

std::vector<double> sweep_values(const RunConfig& config) {
  SweepRange sweep = config.sweep.value_or(SweepRange{
      0.05 * config.params.s_star_u(), 0.95 * config.params.s_star_u(), 20});
  if (!(sweep.s_min > 0.0) || !(sweep.s_max > sweep.s_min) || sweep.count < 1)
    throw std::domain_error("sweep: need 0 < smin < smax and a positive count");
  std::vector<double> values(sweep.count);
  for (int i = 0; i < sweep.count; ++i)
    values[i] = sweep.count == 1
                    ? sweep.s_min
                    : sweep.s_min + (sweep.s_max - sweep.s_min) * double(i) /
                                        double(sweep.count - 1);
  return values;
}

std::vector<double> scan_grid(const RunConfig& config) {
  if (!config.sweep) return default_s_grid(config.params);
  const SweepRange& sweep = *config.sweep;
  if (!(sweep.s_min > 0.0) || !(sweep.s_max > sweep.s_min) || sweep.count < 2)
    throw std::domain_error("sweep: need 0 < smin < smax and count >= 2");
  std::vector<double> values(sweep.count);
  const double lo = std::log(sweep.s_min), hi = std::log(sweep.s_max);
  for (int i = 0; i < sweep.count; ++i)
    values[i] = std::exp(lo + (hi - lo) * double(i) / double(sweep.count - 1));
  return values;
}

ContinuationConfig continuation_config(const RunConfig& config) {
  ContinuationConfig cc;
  cc.initial_amplitude = config.amplitude;
  cc.step = config.step;
  cc.max_steps = config.max_steps;
  cc.newton_tol = std::min(config.tol, 1e-8);
  return cc;
}

std::vector<Branch> trace_branches(const RunConfig& config, const RadialGrid& grid,
                                   int k_lo, int k_hi, bool both_directions) {
  const BifurcationScan scan =
      find_bifurcation_points(config.params, k_lo, k_hi, scan_grid(config), config.tol, grid);
  const ContinuationConfig cc = continuation_config(config);
  std::vector<Branch> branches;
  std::vector<bool> seeded(std::size_t(k_hi + 1), false);
  for (const BifurcationPoint& point : scan.points) {
    if (seeded[std::size_t(point.k)]) continue;  // branch seeds use the first crossing
    seeded[std::size_t(point.k)] = true;
    branches.push_back(continue_branch(point, config.params, cc, config.direction));
    if (both_directions)
      branches.push_back(continue_branch(point, config.params, cc, -config.direction));
  }
  return branches;
}

int write_output(const RunConfig& config, const std::string& text) {
  if (config.output_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open output path: " << config.output_path << '\n';
    return kExitIoError;
  }
  out << text;
  if (!out.good()) {
    std::cerr << "write failed: " << config.output_path << '\n';
    return kExitIoError;
  }
  return kExitOk;
}

int run_ground_state(const RunConfig& config) {
  const RadialGrid grid = make_grid(config);
  const RadialProfile us =
      scalar_ground_state(ScalarProblem::first_of(config.params), grid);
  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    write_profile_csv(us, out);
  } else {
    out << json{{"r_max", grid.r_max},
                {"num_points", grid.num_points},
                {"values", std::vector<double>(us.values.begin(), us.values.end())}}
               .dump(2)
        << '\n';
  }
  return write_output(config, out.str());
}

Spectrum spectrum_at(const Params& params, double s, const RadialGrid& grid, int kmax) {
  Params p = params;
  p.s = s;
  const RadialProfile us = scalar_ground_state(ScalarProblem::first_of(p), grid);
  return eigenvalues_L(potential_Ws(us, p), p.lambda2, p.n, kmax);
}

int run_spectrum(const RunConfig& config) {
  const RadialGrid grid = make_grid(config);
  const Spectrum spec = spectrum_at(config.params, config.params.s, grid, config.kmax);
  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    out << "k,mu\n";
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k)
      out << k << ',' << format_double(spec.eigenvalues[k]) << '\n';
  } else {
    out << json{{"eigenvalues", spec.eigenvalues}, {"truncated", spec.truncated}}.dump(2)
        << '\n';
  }
  return write_output(config, out.str());
}

int run_eigencurves(const RunConfig& config) {
  const RadialGrid grid = make_grid(config);
  const std::vector<double> s_values = sweep_values(config);
  std::vector<std::vector<double>> curves;
  curves.reserve(s_values.size());
  for (double s : s_values) {
    const Spectrum spec = spectrum_at(config.params, s, grid, config.kmax);
    std::vector<double> row(std::size_t(config.kmax), 0.0);
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) row[k] = spec.eigenvalues[k];
    curves.push_back(std::move(row));
  }
  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    write_eigencurves_csv(s_values, curves, out);
  } else {
    out << json{{"s", s_values}, {"mu", curves}}.dump(2) << '\n';
  }
  return write_output(config, out.str());
}

int run_bifurcation_points(const RunConfig& config) {
  const RadialGrid grid = make_grid(config);
  const BifurcationScan scan = find_bifurcation_points(config.params, 0, config.kmax,
                                                       scan_grid(config), config.tol, grid);
  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    out << "k,s_k,s_lo,s_hi,mu_residual\n";
    for (const BifurcationPoint& p : scan.points)
      out << p.k << ',' << format_double(p.s_k) << ',' << format_double(p.s_lo) << ','
          << format_double(p.s_hi) << ',' << format_double(p.mu_residual) << '\n';
  } else {
    json points = json::array();
    for (const BifurcationPoint& p : scan.points)
      points.push_back(json{{"k", p.k},
                            {"s_k", p.s_k},
                            {"s_lo", p.s_lo},
                            {"s_hi", p.s_hi},
                            {"mu_residual", p.mu_residual}});
    out << json{{"points", std::move(points)},
                {"no_crossing", scan.ks_without_crossing}}
               .dump(2)
        << '\n';
  }
  return write_output(config, out.str());
}

int run_continue_branch(const RunConfig& config) {
  const RadialGrid grid = make_grid(config);
  const BifurcationScan scan =
      find_bifurcation_points(config.params, config.branch_k, config.branch_k,
                              scan_grid(config), config.tol, grid);
  if (scan.points.empty())
    throw std::runtime_error("continue-branch: no crossing detected for the requested k");
  const Branch branch =
      continue_branch(scan.points.front(), config.params, continuation_config(config),
                      config.direction);
  std::ostringstream out;
  export_branch(branch, out, config.format);
  return write_output(config, out.str());
}

int run_verify_groundstate(const RunConfig& config) {
  const RadialGrid grid = make_grid(config);
  const std::vector<Branch> branches = trace_branches(config, grid, 0, config.kmax, true);
  const EnergyReport report =
      verify_semitrivial_groundstate(branches, config.params, grid);
  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    out << "branch_k,point_index,s,energy,margin,violation\n";
    for (const EnergyCandidate& c : report.candidates)
      out << c.branch_k << ',' << c.point_index << ',' << format_double(c.s) << ','
          << format_double(c.energy) << ',' << format_double(c.margin) << ','
          << (c.violation ? 1 : 0) << '\n';
  } else {
    out << energy_report_to_json(report).dump(2) << '\n';
  }
  return write_output(config, out.str());
}

int run_check_conditions(const RunConfig& config) {
  config.params.validate();
  json report;
  report["hypothesis_ratio"] = config.params.lambda2 / config.params.lambda1;
  report["coupling_ratio"] = config.params.beta / config.params.alpha;
  if (config.params.n == 1) {
    json cor2 = json::object();
    for (int k0 = 0; k0 <= config.kmax; ++k0)
      cor2[std::to_string(k0)] = check_corollary2(config.params, k0);
    report["corollary2"] = std::move(cor2);
  } else {
    report["corollary1"] = check_corollary1(config.params);
  }
  const PositivityVerdict verdict = positivity_constraint(config.params);
  json pos;
  switch (verdict.kind) {
    case PositivityKind::SymmetricFamily: pos["kind"] = "symmetric_family"; break;
    case PositivityKind::Bound: pos["kind"] = "bound"; break;
    case PositivityKind::NoPositive: pos["kind"] = "no_positive"; break;
  }
  if (verdict.bound) pos["bound"] = *verdict.bound;
  report["positivity"] = std::move(pos);

  std::ostringstream out;
  if (config.format == OutputFormat::Csv) {
    out << "key,value\n";
    for (const auto& [key, value] : report.items()) out << key << ',' << value.dump() << '\n';
  } else {
    out << report.dump(2) << '\n';
  }
  return write_output(config, out.str());
}

int run_box_oracle(const RunConfig& config) {
  if (config.eps_values.empty())
    throw std::domain_error("box-oracle: need at least one eps value");
  RadialGrid grid{config.r_max, config.points};
  if (config.r_max <= 0.0) {
    double eps_min = config.eps_values.front();
    for (double e : config.eps_values) eps_min = std::min(eps_min, e);
    grid.r_max = 1.2 / eps_min;
  }
  grid.validate();
  std::ostringstream out;
  json rows = json::array();
  if (config.format == OutputFormat::Csv) out << "eps,mu\n";
  for (double eps : config.eps_values) {
    const double mu =
        box_potential_eigen(config.kappa, config.box_lambda, eps, config.k_index,
                            config.params.n, grid);
    if (config.format == OutputFormat::Csv)
      out << format_double(eps) << ',' << format_double(mu) << '\n';
    else
      rows.push_back(json{{"eps", eps}, {"mu", mu}});
  }
  if (config.format == OutputFormat::Json)
    out << json{{"k", config.k_index}, {"values", std::move(rows)}}.dump(2) << '\n';
  return write_output(config, out.str());
}

}  // namespace

int run(const RunConfig& config) {
  try {
    config.params.validate();
    switch (config.command) {
      case Command::GroundState: return run_ground_state(config);
      case Command::Spectrum: return run_spectrum(config);
      case Command::Eigencurves: return run_eigencurves(config);
      case Command::BifurcationPoints: return run_bifurcation_points(config);
      case Command::ContinueBranch: return run_continue_branch(config);
      case Command::VerifyGroundstate: return run_verify_groundstate(config);
      case Command::CheckConditions: return run_check_conditions(config);
      case Command::BoxOracle: return run_box_oracle(config);
    }
    return kExitUsage;
  } catch (const std::domain_error& err) {
    std::cerr << "domain error: " << err.what() << '\n';
    return kExitDomainError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "domain error: " << err.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << '\n';
    return kExitSolverFailure;
  }
}

}  // namespace satnls

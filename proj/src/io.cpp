#include "satnls/io.hpp"

#include <cstdio>
#include <ostream>

namespace satnls {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_branch_csv(const Branch& branch, std::ostream& out) {
  out << "step,s,energy,residual,nodes_u,nodes_v,min_u,min_v,norm_u,norm_v\n";
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    const BranchPoint& pt = branch.points[i];
    out << i << ',' << format_double(pt.s) << ',' << format_double(pt.energy) << ','
        << format_double(pt.residual_norm) << ',' << pt.nodal_type.first << ','
        << pt.nodal_type.second << ',' << format_double(pt.min_values.first) << ','
        << format_double(pt.min_values.second) << ',' << format_double(pt.norms.first) << ','
        << format_double(pt.norms.second) << '\n';
  }
}

namespace {

json grid_to_json(const RadialGrid& grid) {
  return json{{"r_max", grid.r_max}, {"num_points", grid.num_points}};
}

RadialGrid grid_from_json(const json& j) {
  return RadialGrid{j.at("r_max").get<double>(), j.at("num_points").get<Eigen::Index>()};
}

json profile_to_json(const RadialProfile& profile) {
  return json{{"grid", grid_to_json(profile.grid)},
              {"values", std::vector<double>(profile.values.begin(), profile.values.end())}};
}

RadialProfile profile_from_json(const json& j) {
  const auto vals = j.at("values").get<std::vector<double>>();
  RadialProfile profile;
  profile.grid = grid_from_json(j.at("grid"));
  profile.values = Eigen::Map<const Eigen::ArrayXd>(vals.data(), Eigen::Index(vals.size()));
  return profile;
}

json point_to_json(const BranchPoint& pt) {
  return json{{"u", profile_to_json(pt.state.u)},
              {"v", profile_to_json(pt.state.v)},
              {"s", pt.s},
              {"residual", pt.residual_norm},
              {"energy", pt.energy},
              {"nodes_u", pt.nodal_type.first},
              {"nodes_v", pt.nodal_type.second},
              {"min_u", pt.min_values.first},
              {"min_v", pt.min_values.second},
              {"norm_u", pt.norms.first},
              {"norm_v", pt.norms.second}};
}

BranchPoint point_from_json(const json& j) {
  BranchPoint pt;
  pt.state.u = profile_from_json(j.at("u"));
  pt.state.v = profile_from_json(j.at("v"));
  pt.s = j.at("s").get<double>();
  pt.residual_norm = j.at("residual").get<double>();
  pt.energy = j.at("energy").get<double>();
  pt.nodal_type = {j.at("nodes_u").get<int>(), j.at("nodes_v").get<int>()};
  pt.min_values = {j.at("min_u").get<double>(), j.at("min_v").get<double>()};
  pt.norms = {j.at("norm_u").get<double>(), j.at("norm_v").get<double>()};
  return pt;
}

}  // namespace

json branch_to_json(const Branch& branch) {
  json points = json::array();
  for (const BranchPoint& pt : branch.points) points.push_back(point_to_json(pt));
  return json{{"k", branch.k},
              {"origin",
               json{{"k", branch.origin.k},
                    {"s_k", branch.origin.s_k},
                    {"s_lo", branch.origin.s_lo},
                    {"s_hi", branch.origin.s_hi},
                    {"mu_residual", branch.origin.mu_residual},
                    {"kernel", profile_to_json(branch.origin.kernel_fn)}}},
              {"termination", branch.termination},
              {"points", std::move(points)}};
}

Branch branch_from_json(const json& j) {
  Branch branch;
  branch.k = j.at("k").get<int>();
  const json& origin = j.at("origin");
  branch.origin.k = origin.at("k").get<int>();
  branch.origin.s_k = origin.at("s_k").get<double>();
  branch.origin.s_lo = origin.at("s_lo").get<double>();
  branch.origin.s_hi = origin.at("s_hi").get<double>();
  branch.origin.mu_residual = origin.at("mu_residual").get<double>();
  branch.origin.kernel_fn = profile_from_json(origin.at("kernel"));
  branch.termination = j.at("termination").get<std::string>();
  for (const json& pj : j.at("points")) branch.points.push_back(point_from_json(pj));
  return branch;
}

void export_branch(const Branch& branch, std::ostream& out, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_branch_csv(branch, out);
  } else {
    out << branch_to_json(branch).dump(2) << '\n';
  }
}

void write_eigencurves_csv(const std::vector<double>& s_values,
                           const std::vector<std::vector<double>>& curves,
                           std::ostream& out) {
  const std::size_t k_count = curves.empty() ? 0 : curves.front().size();
  out << 's';
  for (std::size_t k = 0; k < k_count; ++k) out << ",mu_" << k;
  out << '\n';
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    out << format_double(s_values[i]);
    for (std::size_t k = 0; k < k_count; ++k) out << ',' << format_double(curves[i][k]);
    out << '\n';
  }
}

void write_profile_csv(const RadialProfile& profile, std::ostream& out,
                       const std::string& value_name) {
  out << "r," << value_name << '\n';
  for (Eigen::Index i = 0; i < profile.values.size(); ++i)
    out << format_double(profile.grid.node(i)) << ',' << format_double(profile.values[i])
        << '\n';
}

json energy_report_to_json(const EnergyReport& report) {
  json candidates = json::array();
  for (const EnergyCandidate& c : report.candidates) {
    candidates.push_back(json{{"branch_k", c.branch_k},
                              {"point_index", c.point_index},
                              {"s", c.s},
                              {"energy", c.energy},
                              {"margin", c.margin},
                              {"violation", c.violation}});
  }
  return json{{"c_s_star", report.c_s_star},
              {"symmetric_case", report.symmetric_case},
              {"theta_spread", report.theta_spread},
              {"tol", report.tol},
              {"violations", report.violations},
              {"candidates", std::move(candidates)}};
}

}  // namespace satnls

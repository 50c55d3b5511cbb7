#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "satnls/branch_continuation.hpp"
#include "satnls/energy_functional.hpp"

namespace satnls {

enum class OutputFormat { Csv, Json };

/// "%.17g" rendering; enough digits for an exact double round trip.
std::string format_double(double value);

/// CSV with the fixed header
///   step,s,energy,residual,nodes_u,nodes_v,min_u,min_v,norm_u,norm_v
/// and one row per branch point in step order.
void write_branch_csv(const Branch& branch, std::ostream& out);

/// JSON mirror of the Branch type including the origin metadata and the
/// full state vectors; re-import reproduces every point bit-exactly.
nlohmann::json branch_to_json(const Branch& branch);
Branch branch_from_json(const nlohmann::json& j);

void export_branch(const Branch& branch, std::ostream& out, OutputFormat format);

/// CSV with header s,mu_0,...,mu_{k-1}; one row per sweep value.
void write_eigencurves_csv(const std::vector<double>& s_values,
                           const std::vector<std::vector<double>>& curves,
                           std::ostream& out);

void write_profile_csv(const RadialProfile& profile, std::ostream& out,
                       const std::string& value_name = "u");

nlohmann::json energy_report_to_json(const EnergyReport& report);

}  // namespace satnls

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "satnls/cli.hpp"

namespace {

using satnls::Command;
using satnls::OutputFormat;
using satnls::RunConfig;

struct SweepFlags {
  double smin = 0.0, smax = 0.0;
  int scount = 0;
};

// Flat key=value lines, or a single JSON object; '#' starts a comment line.
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::map<std::string, std::string> values;

  const auto first_char = text.find_first_not_of(" \t\r\n");
  if (first_char != std::string::npos && text[first_char] == '{') {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.items())
      values[key] = value.is_string() ? value.get<std::string>() : value.dump();
    return values;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) values[key] = value;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states, linearized spectra, bifurcation points and solution "
               "branches of the saturated two-component Schrodinger system"};
  app.require_subcommand(1);

  RunConfig config;
  SweepFlags sweep;
  std::string config_path;
  std::string format_name = "csv";

  // Option pointers per flag key, to let explicit flags override file values.
  struct BoundOption {
    CLI::Option* opt;
    CLI::App* owner;
    std::function<void(const std::string&)> set;
  };
  std::map<std::string, std::vector<BoundOption>> bound;

  const auto add_common = [&](CLI::App* cmd) {
    const auto reg = [&](const std::string& key, CLI::Option* opt,
                         std::function<void(const std::string&)> set) {
      bound[key].push_back({opt, cmd, std::move(set)});
    };
    reg("lambda1", cmd->add_option("--lambda1", config.params.lambda1),
        [&](const std::string& v) { config.params.lambda1 = std::stod(v); });
    reg("lambda2", cmd->add_option("--lambda2", config.params.lambda2),
        [&](const std::string& v) { config.params.lambda2 = std::stod(v); });
    reg("alpha", cmd->add_option("--alpha", config.params.alpha),
        [&](const std::string& v) { config.params.alpha = std::stod(v); });
    reg("beta", cmd->add_option("--beta", config.params.beta),
        [&](const std::string& v) { config.params.beta = std::stod(v); });
    reg("s", cmd->add_option("--s", config.params.s),
        [&](const std::string& v) { config.params.s = std::stod(v); });
    reg("n", cmd->add_option("--n", config.params.n),
        [&](const std::string& v) { config.params.n = std::stoi(v); });
    reg("rmax", cmd->add_option("--rmax", config.r_max),
        [&](const std::string& v) { config.r_max = std::stod(v); });
    reg("points", cmd->add_option("--points", config.points),
        [&](const std::string& v) { config.points = std::stoll(v); });
    reg("kmax", cmd->add_option("--kmax", config.kmax),
        [&](const std::string& v) { config.kmax = std::stoi(v); });
    reg("smin", cmd->add_option("--smin", sweep.smin),
        [&](const std::string& v) { sweep.smin = std::stod(v); });
    reg("smax", cmd->add_option("--smax", sweep.smax),
        [&](const std::string& v) { sweep.smax = std::stod(v); });
    reg("scount", cmd->add_option("--scount", sweep.scount),
        [&](const std::string& v) { sweep.scount = std::stoi(v); });
    reg("tol", cmd->add_option("--tol", config.tol),
        [&](const std::string& v) { config.tol = std::stod(v); });
    reg("out", cmd->add_option("--out", config.output_path),
        [&](const std::string& v) { config.output_path = v; });
    reg("format", cmd->add_option("--format", format_name)->check(CLI::IsMember({"csv", "json"})),
        [&](const std::string& v) { format_name = v; });
    cmd->add_option("--config", config_path, "key=value or JSON config file; flags override");
  };

  struct SubEntry {
    CLI::App* cmd;
    Command command;
  };
  std::vector<SubEntry> subs;

  const auto add_sub = [&](const std::string& name, const std::string& desc, Command c) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common(cmd);
    subs.push_back({cmd, c});
    return cmd;
  };

  add_sub("ground-state", "Scalar ground state u_s on the radial grid", Command::GroundState);
  add_sub("spectrum", "Leading eigenvalues of the linearized operator at s",
          Command::Spectrum);
  add_sub("eigencurves", "Eigenvalue curves mu_k(s) over an s-sweep", Command::Eigencurves);
  add_sub("bifurcation-points", "Roots of mu_k(s) = 1 on the semitrivial branch",
          Command::BifurcationPoints);
  CLI::App* cont = add_sub("continue-branch", "Pseudo-arclength branch from a bifurcation point",
                           Command::ContinueBranch);
  CLI::App* verify = add_sub("verify-groundstate",
                             "Energy comparison of branch points against c_s^*",
                             Command::VerifyGroundstate);
  add_sub("check-conditions", "Sufficient bifurcation conditions and the positivity constraint",
          Command::CheckConditions);
  CLI::App* box = add_sub("box-oracle", "Box-potential eigenvalues (spectral limit oracle)",
                          Command::BoxOracle);

  cont->add_option("--k", config.branch_k, "eigenvalue index of the branch");
  cont->add_option("--direction", config.direction)->check(CLI::IsMember({-1, 1}));
  for (CLI::App* cmd : {cont, verify}) {
    cmd->add_option("--steps", config.max_steps);
    cmd->add_option("--step", config.step);
    cmd->add_option("--amplitude", config.amplitude);
  }

  box->add_option("--kappa", config.kappa);
  box->add_option("--lambda", config.box_lambda);
  box->add_option("--eps", config.eps_values)->expected(-1);
  box->add_option("--k", config.k_index);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << '\n';
    return satnls::kExitUsage;
  }

  CLI::App* active = nullptr;
  for (const SubEntry& entry : subs)
    if (entry.cmd->parsed()) {
      active = entry.cmd;
      config.command = entry.command;
    }

  if (!config_path.empty()) {
    try {
      const auto file_values = load_config_file(config_path);
      for (const auto& [key, value] : file_values) {
        const auto it = bound.find(key);
        if (it == bound.end()) continue;
        // Apply only when the flag was not given on the command line.
        for (const BoundOption& entry : it->second)
          if (entry.owner == active && entry.opt->count() == 0) entry.set(value);
      }
    } catch (const std::exception& err) {
      std::cerr << "config file error: " << err.what() << '\n';
      return satnls::kExitIoError;
    }
  }

  if (sweep.scount > 0) config.sweep = satnls::SweepRange{sweep.smin, sweep.smax, sweep.scount};
  config.format = (format_name == "json") ? OutputFormat::Json : OutputFormat::Csv;

  return satnls::run(config);
}

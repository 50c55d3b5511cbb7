#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satnls/core_model.hpp"
#include "satnls/io.hpp"

namespace satnls {

enum class Command {
  GroundState,
  Spectrum,
  Eigencurves,
  BifurcationPoints,
  ContinueBranch,
  VerifyGroundstate,
  CheckConditions,
  BoxOracle,
};

struct SweepRange {
  double s_min = 0.0;
  double s_max = 0.0;
  int count = 0;
};

/// One CLI invocation: exactly one command, validated parameters, grid
/// settings, optional s-sweep and output destination.
struct RunConfig {
  Command command = Command::CheckConditions;
  Params params;
  double r_max = 0.0;  // 0 -> derived from the decay margin
  Eigen::Index points = 2001;
  std::optional<SweepRange> sweep;
  int kmax = 4;
  double tol = 1e-8;
  std::string output_path;  // empty -> stdout
  OutputFormat format = OutputFormat::Csv;

  // box-oracle
  double kappa = 1.0;
  double box_lambda = 1.0;
  std::vector<double> eps_values{0.1, 0.05, 0.01};
  int k_index = 0;

  // continue-branch / verify-groundstate
  int branch_k = 1;
  int direction = 1;
  int max_steps = 100;
  double step = 0.01;
  double amplitude = 1e-3;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitSolverFailure = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIoError = 74;

/// Dispatches the command, writes the output files, and maps failures to the
/// exit code contract: 0 success, 1 domain error, 2 solver failure, 74 I/O.
/// Runs are deterministic given the config.
int run(const RunConfig& config);

}  // namespace satnls

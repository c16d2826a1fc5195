#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgroup/oracle.hpp"
#include "kgroup/problems.hpp"
#include "kgroup/trainer.hpp"

namespace kgroup {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kResultSchema = 1;

// Exit codes shared by every subcommand.
inline constexpr int kExitFeasible = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

// Complete description of one solve run; round-trips through JSON and is
// echoed inside results so a stored result can be reproduced.
struct RunConfig {
  std::string problem = "maxcut";
  std::string input;
  std::string format = "auto";
  int k = 0;  // 0 = problem default
  double alpha = 1.0;
  double beta = 1.0;
  bool normalize_balance = true;
  double mis_penalty = 2.0;

  std::string backend = "message-passing";
  int layers = 0;  // 0 = default (4 for partitioning, else 2)
  int hidden_dim = 64;
  int feature_dim = 64;
  int fc_layers = 1;
  double init_scale = 1.0;

  double learning_rate = 1e-4;
  int epochs = 5000;
  int restarts = 10;
  bool anneal = true;
  double gamma0 = 0.0;  // 0 = problem default (-0.25 partitioning, else -2.5)
  int t_zero = 1000;
  double gamma_cap = 0.0;  // 0 = |gamma0|
  double lambda_cap = 10.0;
  std::uint64_t seed = 0;
  int snapshot_interval = 50;
  int threads = 0;

  std::string output;  // result JSON path, empty = stdout only
  std::string trace;   // epoch trace CSV path, empty = none
};

std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);

// Effective values derived from a RunConfig.
ProblemInstance make_problem(const RunConfig& config);
TrainConfig make_train_config(const RunConfig& config, ObjectiveKind objective);
double default_gamma0(ObjectiveKind objective);

struct RestartSummary {
  int restart = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double objective = 0.0;
  long metric = 0;
  int first_feasible_epoch = -1;
  bool diverged = false;
};

struct SolveResult {
  int schema = kResultSchema;
  std::string tool_version = kToolVersion;
  bool feasible = false;
  double objective = 0.0;
  std::vector<int> assignment;
  // Metric block; -1 / empty where a field does not apply.
  long violated_terms = 0;
  long cut = -1;
  int colors = -1;
  long mis_size = -1;
  double balance = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  std::vector<int> group_sizes;
  int first_feasible_epoch = -1;
  int best_restart = -1;
  int best_epoch = -1;
  int diverged_restarts = 0;
  double wall_seconds = 0.0;
  std::vector<RestartSummary> restarts;
  RunConfig config;
};

std::string solve_result_to_json(const SolveResult& result);
SolveResult solve_result_from_json(const std::string& text);

// Fills the metric block of a result from a verifier report.
void apply_report(SolveResult& result, const VerifyReport& report);

// Epoch trace of the winning restart:
// epoch,loss,mean_gini,metric,gamma,lambda1,lambda2 (metric blank between
// hardened snapshots).
std::string trace_to_csv(const std::vector<TraceRow>& trace);

// Solve end to end: load, compile, train, verify, write outputs. Returns
// kExitFeasible or kExitInfeasible. Throws on configuration or I/O errors.
int cmd_solve(const RunConfig& config, std::ostream& out);

// Re-checks a stored result against its instance from first principles.
// Returns kExitFeasible/kExitInfeasible; throws if the stored metric block
// does not match the recomputation.
int cmd_verify(const std::string& solution_path, const std::string& input_override,
               std::ostream& out);

// Exhaustive optimum for small instances.
int cmd_oracle(const RunConfig& config, std::uint64_t limit, std::ostream& out);

// Benchmark sweep: a JSON file describing seeded generated instances and a
// list of named solver configurations; writes one CSV row per (config,
// instance) plus mean/stddev aggregate rows per config.
int cmd_bench(const std::string& sweep_path, const std::string& csv_path, std::ostream& out);

}  // namespace kgroup

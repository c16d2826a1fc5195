#pragma once

#include <cstdint>
#include <vector>

#include "kgroup/encoder.hpp"
#include "kgroup/problems.hpp"
#include "kgroup/schedule.hpp"

namespace kgroup {

struct TrainConfig {
  OptimizerConfig opt;
  AnnealSchedule anneal;
  PenaltyRamp conflict_ramp = PenaltyRamp::over(10.0, 1000);  // coloring conflict weight
  PenaltyRamp usage_ramp = PenaltyRamp::over(10.0, 1000);     // color-usage weight
  EncoderConfig encoder;
  std::uint64_t seed = 0;
  int snapshot_interval = 50;  // epochs between hardened evaluations
  int threads = 0;             // 0: KGROUP_THREADS env var, else hardware count
};

struct TraceRow {
  int epoch = 0;
  double loss = 0.0;
  double mean_gini = 0.0;
  bool has_metric = false;
  double metric = 0.0;  // hardened conflict/cut count at snapshot epochs
  double gamma = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct RestartOutcome {
  int restart = 0;
  std::uint64_t seed = 0;
  bool has_best = false;
  std::vector<int> best_labels;
  HardEval best_eval;
  int best_epoch = -1;
  int first_feasible_epoch = -1;
  bool diverged = false;
  double final_mean_gini = 0.0;
  double final_confident_fraction = 0.0;  // rows whose max entry >= 0.99
  Tensor final_x;
  std::vector<TraceRow> trace;
};

struct TrainResult {
  std::vector<int> labels;  // best hardened assignment across restarts
  HardEval eval;
  bool has_solution = false;
  int best_restart = -1;
  int best_epoch = -1;
  int first_feasible_epoch = -1;  // minimum across restarts, -1 if never
  int diverged_restarts = 0;
  double wall_seconds = 0.0;
  std::vector<RestartOutcome> restarts;
};

// Row concentration penalty gamma * sum_i (1 - sum_c x_ic^2). Each row
// contributes 0 when one-hot and 1 - 1/k when uniform, so a negative weight
// rewards spread-out rows and a positive weight drives rows to corners.
double gini_penalty(const Tensor& x, double gamma);
double mean_row_gini(const Tensor& x);
ValueId gini_penalty_node(Tape& tape, ValueId x, double gamma, int num_rows);

// Argmax per row; ties break to the lowest column index.
std::vector<int> harden(const Tensor& x);

// Fraction of rows whose largest entry reaches `threshold`.
double confident_fraction(const Tensor& x, double threshold = 0.99);

// Minimizes the compiled loss by restarted gradient descent. Hardened
// snapshots are scored every `snapshot_interval` epochs; the returned
// assignment is the best feasible snapshot by objective across all epochs
// and restarts, else the best infeasible one (fewest violations first).
// Identical (loss, config) pairs produce identical results and traces.
TrainResult train(const CompiledLoss& loss, const TrainConfig& config);

// Deterministic per-restart seed derivation.
std::uint64_t restart_seed(std::uint64_t master, int restart);

// Thread count resolution: explicit > KGROUP_THREADS > hardware concurrency.
int resolve_threads(int requested, int tasks);

}  // namespace kgroup

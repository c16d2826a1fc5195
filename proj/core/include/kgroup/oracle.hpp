#pragma once

#include <cstdint>
#include <vector>

#include "kgroup/problems.hpp"

namespace kgroup {

// Independent re-evaluation of a hard assignment, computed from the original
// structure by plain counting loops; shares no code with the compiled
// polynomial machinery on purpose.
struct VerifyReport {
  bool feasible = false;
  long violated_terms = 0;      // conflicts / violated MIS edges; 0 for cut objectives
  double objective = 0.0;       // same scale as HardEval::objective
  std::vector<int> group_sizes;
  long cut_count = 0;           // partition / max-cut objectives
  int colors_used = 0;          // coloring objectives
  long mis_size = 0;            // MIS
  double balance = 0.0;         // beta-weighted balance term (partitioning)
  double b1 = 0.0;              // max(size) / mean(size) - 1
  double b2 = 0.0;              // sqrt(mean squared size deviation)
};

VerifyReport verify(const ProblemInstance& p, const std::vector<int>& labels);

// Exhaustive search over hard assignments. For problems with a feasibility
// notion (coloring: zero conflicts; MIS: independence), infeasible
// assignments are filtered out and the objective is minimized among the
// rest; cut objectives are minimized outright. Group-relabeling symmetry is
// pruned by fixing vertex 0 to group 0 for the label-symmetric objectives.
struct BruteForceResult {
  std::vector<int> labels;
  double objective = 0.0;
  bool found_feasible = false;
  std::uint64_t states_visited = 0;
};

// Throws std::runtime_error if k^|V| (after pruning) exceeds `limit`.
BruteForceResult brute_force(const CompiledLoss& loss, std::uint64_t limit = 10'000'000);

// Saturation-degree greedy coloring: repeatedly color the vertex with the
// most distinctly-colored neighbors, breaking ties by higher degree, then
// lower index, using the smallest color valid for its neighborhood.
struct DsaturResult {
  std::vector<int> labels;
  int colors_used = 0;
};
DsaturResult dsatur_coloring(const Graph& g);

}  // namespace kgroup

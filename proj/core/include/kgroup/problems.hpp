#pragma once

#include <string>
#include <vector>

#include "kgroup/hypergraph.hpp"
#include "kgroup/pubo.hpp"
#include "kgroup/tape.hpp"

namespace kgroup {

enum class ProblemKind {
  kGraphColoring,
  kStrongColoring,   // no two vertices sharing a hyperedge get the same color
  kProperColoring,   // no hyperedge is monochromatic
  kGraphPartition,
  kHypergraphPartition,
  kMaxCut,
  kMis,
};

enum class ObjectiveKind { kColoring, kPartition, kMaxcut, kMis };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

// A problem posed on a concrete structure. `k` is the number of groups
// (colors available, blocks, 2 for max-cut and MIS); 0 means "use the
// problem's default".
struct ProblemInstance {
  ProblemKind kind = ProblemKind::kMaxCut;
  Hypergraph structure;  // 2-uniform for graph problems
  int k = 0;
  double alpha = 1.0;            // partition cut weight
  double beta = 1.0;             // partition balance weight
  bool normalize_balance = true; // divide squared deviation by |V|^2 / k
  double mis_penalty = 2.0;      // edge penalty P (> 1)

  Graph graph() const;  // view of `structure`; throws if not 2-uniform
};

// Differentiable surrogate of a problem, compiled to one-hot polynomial
// terms. Penalty weights that ramp during training (the conflict weight and
// color-usage weight of the coloring losses) are supplied by the trainer at
// evaluation time; everything here is immutable after compilation.
struct CompiledLoss {
  ObjectiveKind objective_kind = ObjectiveKind::kMaxcut;
  int k = 0;
  OneHotPubo pubo;    // objective / constraint terms over the group matrix
  OneHotQubo qubo;    // pairwise form, populated for max-cut and MIS
  bool has_qubo = false;
  // Constant dropped from the differentiable terms and re-added when
  // reporting hard values (the per-edge constants of the partition losses).
  double constant = 0.0;
  bool uses_color_head = false;  // color-count head y is part of the loss
  bool mis_column_only = false;  // loss reads only column 0 of the group matrix
  double alpha = 1.0;
  double beta = 0.0;
  bool normalize_balance = false;
  ProblemInstance problem;  // the instance this was compiled from
};

// Conflict/cut edges turn into 2-vertex terms with coefficient 1.
// k defaults to max degree + 1.
CompiledLoss compile_graph_coloring(const Graph& g, int k = 0);

// Every vertex pair co-occurring in a hyperedge becomes a 2-vertex term; the
// coefficient accumulates the number of shared hyperedges. k defaults to
// twice the largest hyperedge size; k below the largest hyperedge size is
// provably infeasible and throws.
CompiledLoss compile_hypergraph_strong_coloring(const Hypergraph& h, int k = 0);

// One term per hyperedge with coefficient 1, penalizing monochromatic
// hyperedges. Singleton hyperedges are always monochromatic, hence
// infeasible, and throw. k defaults to 2.
CompiledLoss compile_hypergraph_proper_coloring(const Hypergraph& h, int k = 0);

// Cut term per edge: same block contributes 0, split blocks 2; compiled as a
// pair term with coefficient -2 plus a per-edge constant 2. The balance term
// beta * sum_c (|P_c| - |V|/k)^2 is assembled at loss-build time.
CompiledLoss compile_graph_partitioning(const Graph& g, int k, double alpha = 1.0,
                                        double beta = 1.0, bool normalize_balance = true);

// Connectivity-style cut: each hyperedge contributes 1 unless monochromatic,
// compiled as a term with coefficient -1 plus a constant 1 (the linear part
// of the loss is constant on row-stochastic matrices and is folded away).
CompiledLoss compile_hypergraph_partitioning(const Hypergraph& h, int k, double alpha = 1.0,
                                             double beta = 1.0, bool normalize_balance = true);

// Pairwise form over k = 2 groups: +2 per edge pair, -1 per endpoint on the
// diagonal. The hard value is exactly -2 * (cut edge count).
CompiledLoss compile_maxcut(const Graph& g);

// Binary form on column 0 ("in the set"): -1 per vertex on the diagonal,
// +P per edge. k = 2; hard value is -|S| + P * (edges inside S).
CompiledLoss compile_mis(const Graph& g, double penalty = 2.0);

CompiledLoss compile(const ProblemInstance& p);

// Hard-assignment evaluation through the compiled terms (the counterpart the
// independent verifier is checked against).
struct HardEval {
  double objective = 0.0;      // quantity the solver minimizes, constants included
  long constraint_count = 0;   // conflicts / cut edges / violated MIS edges
  bool feasible = false;
  int colors_used = 0;         // coloring objectives
  long mis_size = 0;           // MIS objective
  double balance = 0.0;        // partition balance term value (weighted by beta)
};
HardEval evaluate_hard(const CompiledLoss& loss, const std::vector<int>& labels);

// Colors actually used plus conflict count (identical to the verifier's
// counting semantics) for any hard assignment of a coloring problem.
struct ChromaticReport {
  int colors_used = 0;
  long conflicts = 0;
};
ChromaticReport chromatic_report(const CompiledLoss& loss, const std::vector<int>& labels);

// Raw balance term sum_c (size_c - n/k)^2, divided by n^2/k when normalized.
double balance_value(const std::vector<int>& group_sizes, int n, int k, bool normalize);

// Constants reused across every epoch's tape; must outlive the tapes.
struct LossGraphContext {
  QuboLossContext qubo_ctx;
  PuboLossContext pubo_ctx;
  bool use_qubo = false;
  int num_vertices = 0;
};
LossGraphContext make_loss_graph_context(const CompiledLoss& loss);

// Scheduled weights for one epoch.
struct LossWeights {
  double pubo_weight = 1.0;   // alpha, or the ramped conflict weight
  double usage_weight = 0.0;  // ramped color-usage weight
};

// Assembles the differentiable loss (objective + constraint + balance +
// color-head terms) on the tape. y must be valid iff the loss uses the color
// head. The annealing penalty is added separately by the trainer.
ValueId build_loss_node(Tape& tape, const CompiledLoss& loss, const LossGraphContext& ctx,
                        ValueId x, ValueId y, const LossWeights& w);

}  // namespace kgroup

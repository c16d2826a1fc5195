#pragma once

#include <vector>

#include "kgroup/hypergraph.hpp"
#include "kgroup/tape.hpp"
#include "kgroup/tensor.hpp"

namespace kgroup {

enum class AssignMode { kHard, kRelaxed };

// Row-stochastic |V| x k group-membership matrix. Hard assignments are
// exactly one-hot 0/1 rows; relaxed assignments have entries in [0, 1] with
// each row summing to 1 within 1e-9.
struct Assignment {
  Tensor x;
  AssignMode mode = AssignMode::kHard;

  static Assignment hard(const std::vector<int>& labels, int k);
  static Assignment relaxed(Tensor x);

  int num_vertices() const { return x.rows(); }
  int k() const { return x.cols(); }

  // Hard assignments only: the group index per vertex.
  std::vector<int> labels() const;

  // Throws std::invalid_argument on an invariant breach.
  void validate() const;
};

// Pairwise objective over one-hot rows: sum_{i<=j} Q_ij * <x_i, x_j>, with
// the diagonal holding linear coefficients (x_i . x_i collapses to x_i for
// one-hot rows, so Q_ii multiplies sum(x_i)). Stored upper-triangular.
struct OneHotQubo {
  int n = 0;
  Tensor q;  // n x n, entries below the diagonal all zero

  OneHotQubo() = default;
  OneHotQubo(int n, Tensor q);

  // Folds an arbitrary square matrix into upper-triangular form:
  // q'_ij = q_ij + q_ji for i < j, diagonal kept.
  static OneHotQubo fold(const Tensor& dense);
};

// Higher-order objective: one coefficient per hyperedge, value
// sum_e Q_e * sum_c prod_{v in e} X_vc. Terms map one-to-one onto the
// hyperedges of `terms`.
struct OneHotPubo {
  Hypergraph terms;
  std::vector<double> coeffs;  // one per hyperedge

  OneHotPubo() = default;
  OneHotPubo(Hypergraph terms, std::vector<double> coeffs);
};

// Reference evaluator: explicit double loop over index pairs.
double eval_qubo_naive(const OneHotQubo& inst, const Assignment& a);

// Matrix-form evaluator. Hard mode contracts the full quadratic form in one
// shot; relaxed mode evaluates the diagonal as linear terms and the
// off-diagonal part as the quadratic form, because squaring a fractional
// entry is not the identity. Agrees with eval_qubo_naive within 1e-9
// relative.
double eval_qubo_vectorized(const OneHotQubo& inst, const Assignment& a);

// The unsplit quadratic form with the diagonal kept inside, valid only for
// hard one-hot assignments. Exposed so tests can pin down how far it drifts
// on relaxed input.
double eval_qubo_unsplit(const OneHotQubo& inst, const Tensor& x);

// Reference evaluator: per term, per group, product over member vertices.
double eval_pubo_naive(const OneHotPubo& inst, const Assignment& a);

// Dense data-parallel evaluator: per group column c, the |V| x |E| slice
// H .* X[:, c] + (1 - H) fills non-member rows with 1, and a column-wise
// product contracts each term. Agrees with eval_pubo_naive within 1e-9.
double eval_pubo_vectorized(const OneHotPubo& inst, const Assignment& a);

// Pair terms become 2-vertex hyperedges, diagonal entries singleton
// hyperedges; zero coefficients are dropped. Evaluation value is preserved.
OneHotPubo pubo_from_qubo(const OneHotQubo& inst);

// Precomputed constants for building relaxed loss graphs on a Tape. The
// context must outlive every tape that references it.
struct QuboLossContext {
  Tensor offdiag_t;  // n x n, (Q - diag) transposed for the matmul form
  Tensor diag_col;   // n x 1 linear coefficients
  bool has_offdiag = false;
  bool has_diag = false;
};
QuboLossContext make_qubo_loss_context(const OneHotQubo& inst);

// Split-form relaxed value of the quadratic objective on the tape:
// sum(X .* (Q_offdiag^T X)) + sum(X .* diag). X may have any column count
// (a single-column matrix evaluates the plain binary quadratic form).
ValueId qubo_loss_node(Tape& tape, const QuboLossContext& ctx, ValueId x);

struct PuboLossContext {
  Tensor h;            // |V| x |E| incidence
  Tensor one_minus_h;  // 1 - h
  Tensor q_row;        // 1 x |E| coefficients
  int num_terms = 0;
};
PuboLossContext make_pubo_loss_context(const OneHotPubo& inst);

// Relaxed higher-order value on the tape via k stacked |V| x |E| slices.
ValueId pubo_loss_node(Tape& tape, const PuboLossContext& ctx, ValueId x, int k);

}  // namespace kgroup

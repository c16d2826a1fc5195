#include "kgroup/pubo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kgroup {

Assignment Assignment::hard(const std::vector<int>& labels, int k) {
  Assignment a;
  a.mode = AssignMode::kHard;
  a.x = Tensor(static_cast<int>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) {
      throw std::invalid_argument("label " + std::to_string(labels[i]) + " out of range [0, " +
                                  std::to_string(k) + ")");
    }
    a.x.at(static_cast<int>(i), labels[i]) = 1.0;
  }
  return a;
}

Assignment Assignment::relaxed(Tensor x) {
  Assignment a;
  a.mode = AssignMode::kRelaxed;
  a.x = std::move(x);
  a.validate();
  return a;
}

std::vector<int> Assignment::labels() const {
  if (mode != AssignMode::kHard) {
    throw std::logic_error("labels() requires a hard assignment");
  }
  std::vector<int> out(x.rows());
  for (int i = 0; i < x.rows(); ++i) {
    int lab = -1;
    for (int c = 0; c < x.cols(); ++c) {
      if (x.at(i, c) == 1.0) lab = c;
    }
    out[i] = lab;
  }
  return out;
}

void Assignment::validate() const {
  for (int i = 0; i < x.rows(); ++i) {
    double sum = 0.0;
    int ones = 0;
    for (int c = 0; c < x.cols(); ++c) {
      const double v = x.at(i, c);
      if (mode == AssignMode::kHard) {
        if (v != 0.0 && v != 1.0) {
          throw std::invalid_argument("hard assignment entry not 0/1 at row " + std::to_string(i));
        }
        ones += v == 1.0;
      } else {
        if (!(v >= 0.0 && v <= 1.0)) {
          throw std::invalid_argument("relaxed entry outside [0, 1] at row " + std::to_string(i));
        }
      }
      sum += v;
    }
    if (mode == AssignMode::kHard && ones != 1) {
      throw std::invalid_argument("hard row " + std::to_string(i) + " is not one-hot");
    }
    if (mode == AssignMode::kRelaxed && std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("relaxed row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

OneHotQubo::OneHotQubo(int n_, Tensor q_) : n(n_), q(std::move(q_)) {
  if (q.rows() != n || q.cols() != n) {
    throw std::invalid_argument("coefficient matrix must be n x n");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (q.at(i, j) != 0.0) {
        throw std::invalid_argument("coefficients below the diagonal must be zero");
      }
    }
  }
}

OneHotQubo OneHotQubo::fold(const Tensor& dense) {
  if (dense.rows() != dense.cols()) {
    throw std::invalid_argument("fold needs a square matrix");
  }
  const int n = dense.rows();
  Tensor q(n, n);
  for (int i = 0; i < n; ++i) {
    q.at(i, i) = dense.at(i, i);
    for (int j = i + 1; j < n; ++j) {
      q.at(i, j) = dense.at(i, j) + dense.at(j, i);
    }
  }
  return OneHotQubo(n, std::move(q));
}

OneHotPubo::OneHotPubo(Hypergraph terms_, std::vector<double> coeffs_)
    : terms(std::move(terms_)), coeffs(std::move(coeffs_)) {
  if (static_cast<std::size_t>(terms.num_hyperedges()) != coeffs.size()) {
    throw std::invalid_argument("coefficient count does not match term count");
  }
}

namespace {

void check_assignment(int n, const Assignment& a) {
  if (a.x.rows() != n) {
    throw std::invalid_argument("assignment has " + std::to_string(a.x.rows()) +
                                " rows, instance needs " + std::to_string(n));
  }
}

double row_dot(const Tensor& x, int i, int j) {
  const double* a = x.row(i);
  const double* b = x.row(j);
  double s = 0.0;
  for (int c = 0; c < x.cols(); ++c) s += a[c] * b[c];
  return s;
}

double row_sum(const Tensor& x, int i) {
  const double* a = x.row(i);
  double s = 0.0;
  for (int c = 0; c < x.cols(); ++c) s += a[c];
  return s;
}

}  // namespace

double eval_qubo_naive(const OneHotQubo& inst, const Assignment& a) {
  check_assignment(inst.n, a);
  double total = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    // Diagonal entries are linear coefficients: x_i . x_i is x_i one-hot.
    const double qd = inst.q.at(i, i);
    if (qd != 0.0) total += qd * row_sum(a.x, i);
    for (int j = i + 1; j < inst.n; ++j) {
      const double qij = inst.q.at(i, j);
      if (qij != 0.0) total += qij * row_dot(a.x, i, j);
    }
  }
  return total;
}

double eval_qubo_unsplit(const OneHotQubo& inst, const Tensor& x) {
  // sum(X^T Q .* X^T) == sum(X .* (Q^T X)); the diagonal stays quadratic.
  double total = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    for (int j = i; j < inst.n; ++j) {
      const double qij = inst.q.at(i, j);
      if (qij != 0.0) total += qij * row_dot(x, i, j);
    }
  }
  return total;
}

double eval_qubo_vectorized(const OneHotQubo& inst, const Assignment& a) {
  check_assignment(inst.n, a);
  const Tensor& x = a.x;
  if (a.mode == AssignMode::kHard) {
    return eval_qubo_unsplit(inst, x);
  }
  // Split form: diagonal as linear terms plus the off-diagonal quadratic
  // form, computed as sum(X .* (Qoff^T X)).
  const int n = inst.n, k = x.cols();
  double total = 0.0;
  Tensor qx(n, k);
  for (int i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    for (int j = i + 1; j < n; ++j) {
      const double qij = inst.q.at(i, j);
      if (qij == 0.0) continue;
      double* qj = qx.row(j);
      for (int c = 0; c < k; ++c) qj[c] += qij * xi[c];
    }
    total += inst.q.at(i, i) * row_sum(x, i);
  }
  for (int j = 0; j < n; ++j) {
    const double* xj = x.row(j);
    const double* qj = qx.row(j);
    for (int c = 0; c < k; ++c) total += xj[c] * qj[c];
  }
  return total;
}

double eval_pubo_naive(const OneHotPubo& inst, const Assignment& a) {
  check_assignment(inst.terms.num_vertices(), a);
  const Tensor& x = a.x;
  const int k = x.cols();
  double total = 0.0;
  for (int j = 0; j < inst.terms.num_hyperedges(); ++j) {
    const auto& e = inst.terms.hyperedge(j);
    double term = 0.0;
    for (int c = 0; c < k; ++c) {
      double prod = 1.0;
      for (int v : e) prod *= x.at(v, c);
      term += prod;
    }
    total += inst.coeffs[j] * term;
  }
  return total;
}

double eval_pubo_vectorized(const OneHotPubo& inst, const Assignment& a) {
  check_assignment(inst.terms.num_vertices(), a);
  const Tensor& x = a.x;
  const int n = inst.terms.num_vertices();
  const int m = inst.terms.num_hyperedges();
  const int k = x.cols();
  if (m == 0) return 0.0;

  const Tensor h = incidence_matrix(inst.terms);
  std::vector<double> slice(static_cast<std::size_t>(n) * m);
  std::vector<double> term_sums(m, 0.0);
  for (int c = 0; c < k; ++c) {
    // slice = H .* X[:, c] + (1 - H): member rows carry X_vc, others 1.
    for (int v = 0; v < n; ++v) {
      const double xv = x.at(v, c);
      const double* hrow = h.row(v);
      double* srow = slice.data() + static_cast<std::size_t>(v) * m;
      for (int j = 0; j < m; ++j) srow[j] = hrow[j] * xv + (1.0 - hrow[j]);
    }
    // Column-wise product over vertices.
    for (int j = 0; j < m; ++j) {
      double prod = 1.0;
      for (int v = 0; v < n; ++v) prod *= slice[static_cast<std::size_t>(v) * m + j];
      term_sums[j] += prod;
    }
  }
  double total = 0.0;
  for (int j = 0; j < m; ++j) total += inst.coeffs[j] * term_sums[j];
  return total;
}

OneHotPubo pubo_from_qubo(const OneHotQubo& inst) {
  std::vector<std::vector<int>> terms;
  std::vector<double> coeffs;
  for (int i = 0; i < inst.n; ++i) {
    const double qd = inst.q.at(i, i);
    if (qd != 0.0) {
      terms.push_back({i});
      coeffs.push_back(qd);
    }
    for (int j = i + 1; j < inst.n; ++j) {
      const double qij = inst.q.at(i, j);
      if (qij != 0.0) {
        terms.push_back({i, j});
        coeffs.push_back(qij);
      }
    }
  }
  return OneHotPubo(Hypergraph(inst.n, std::move(terms)), std::move(coeffs));
}

QuboLossContext make_qubo_loss_context(const OneHotQubo& inst) {
  QuboLossContext ctx;
  ctx.offdiag_t = Tensor(inst.n, inst.n);
  ctx.diag_col = Tensor(inst.n, 1);
  for (int i = 0; i < inst.n; ++i) {
    const double qd = inst.q.at(i, i);
    ctx.diag_col.at(i, 0) = qd;
    if (qd != 0.0) ctx.has_diag = true;
    for (int j = i + 1; j < inst.n; ++j) {
      const double qij = inst.q.at(i, j);
      if (qij != 0.0) {
        ctx.offdiag_t.at(j, i) = qij;  // transposed
        ctx.has_offdiag = true;
      }
    }
  }
  return ctx;
}

ValueId qubo_loss_node(Tape& tape, const QuboLossContext& ctx, ValueId x) {
  ValueId total;
  if (ctx.has_offdiag) {
    ValueId qt = tape.constant_view(&ctx.offdiag_t);
    ValueId quad = tape.reduce_sum(tape.mul(tape.matmul(qt, x), x));
    total = quad;
  }
  if (ctx.has_diag) {
    ValueId d = tape.constant_view(&ctx.diag_col);
    ValueId lin = tape.reduce_sum(tape.mul(x, d));
    total = total.valid() ? tape.add(total, lin) : lin;
  }
  if (!total.valid()) {
    total = tape.constant(Tensor(1, 1));
  }
  return total;
}

PuboLossContext make_pubo_loss_context(const OneHotPubo& inst) {
  PuboLossContext ctx;
  ctx.num_terms = inst.terms.num_hyperedges();
  ctx.h = incidence_matrix(inst.terms);
  ctx.one_minus_h = Tensor(ctx.h.rows(), ctx.h.cols());
  for (std::size_t i = 0; i < ctx.h.size(); ++i) {
    ctx.one_minus_h.data()[i] = 1.0 - ctx.h.data()[i];
  }
  ctx.q_row = Tensor(1, ctx.num_terms);
  for (int j = 0; j < ctx.num_terms; ++j) ctx.q_row.at(0, j) = inst.coeffs[j];
  return ctx;
}

ValueId pubo_loss_node(Tape& tape, const PuboLossContext& ctx, ValueId x, int k) {
  if (ctx.num_terms == 0) {
    return tape.constant(Tensor(1, 1));
  }
  ValueId h = tape.constant_view(&ctx.h);
  ValueId fill = tape.constant_view(&ctx.one_minus_h);
  ValueId q = tape.constant_view(&ctx.q_row);
  ValueId term_sums;  // 1 x |E|, summed over the k slices
  for (int c = 0; c < k; ++c) {
    ValueId col = tape.slice_cols(x, c, c + 1);
    ValueId slice = tape.add(tape.mul(col, h), fill);
    ValueId prods = tape.col_product(slice);
    term_sums = c == 0 ? prods : tape.add(term_sums, prods);
  }
  return tape.reduce_sum(tape.mul(q, term_sums));
}

}  // namespace kgroup

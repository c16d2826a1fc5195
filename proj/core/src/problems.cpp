#include "kgroup/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace kgroup {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kGraphColoring: return "coloring";
    case ProblemKind::kStrongColoring: return "strong-coloring";
    case ProblemKind::kProperColoring: return "proper-coloring";
    case ProblemKind::kGraphPartition: return "partition";
    case ProblemKind::kHypergraphPartition: return "hypergraph-partition";
    case ProblemKind::kMaxCut: return "maxcut";
    case ProblemKind::kMis: return "mis";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "coloring") return ProblemKind::kGraphColoring;
  if (name == "strong-coloring") return ProblemKind::kStrongColoring;
  if (name == "proper-coloring") return ProblemKind::kProperColoring;
  if (name == "partition") return ProblemKind::kGraphPartition;
  if (name == "hypergraph-partition") return ProblemKind::kHypergraphPartition;
  if (name == "maxcut") return ProblemKind::kMaxCut;
  if (name == "mis") return ProblemKind::kMis;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

Graph ProblemInstance::graph() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(structure.num_hyperedges());
  for (const auto& e : structure.hyperedges()) {
    if (e.size() != 2) {
      throw std::invalid_argument("problem '" + to_string(kind) + "' needs a graph, got a hyperedge of size " +
                                  std::to_string(e.size()));
    }
    edges.emplace_back(e[0], e[1]);
  }
  return Graph(structure.num_vertices(), edges);
}

namespace {

ProblemInstance make_instance(ProblemKind kind, Hypergraph structure, int k) {
  ProblemInstance p;
  p.kind = kind;
  p.structure = std::move(structure);
  p.k = k;
  return p;
}

}  // namespace

CompiledLoss compile_graph_coloring(const Graph& g, int k) {
  if (k == 0) k = g.max_degree() + 1;
  if (k < 1) throw std::invalid_argument("coloring needs at least one color");

  std::vector<std::vector<int>> terms;
  std::vector<double> coeffs;
  terms.reserve(g.num_edges());
  for (int j = 0; j < g.num_edges(); ++j) {
    auto [u, v] = g.edge(j);
    terms.push_back({u, v});
    coeffs.push_back(1.0);
  }

  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kColoring;
  loss.k = k;
  loss.pubo = OneHotPubo(Hypergraph(g.num_vertices(), std::move(terms)), std::move(coeffs));
  loss.uses_color_head = true;
  loss.problem = make_instance(ProblemKind::kGraphColoring, g.as_hypergraph(), k);
  return loss;
}

CompiledLoss compile_hypergraph_strong_coloring(const Hypergraph& h, int k) {
  if (k == 0) k = 2 * h.max_hyperedge_size();
  if (k < h.max_hyperedge_size()) {
    throw std::invalid_argument(
        "strong coloring with " + std::to_string(k) + " colors is infeasible: a hyperedge has " +
        std::to_string(h.max_hyperedge_size()) + " vertices that all need distinct colors");
  }
  if (k < 1) throw std::invalid_argument("coloring needs at least one color");

  // Pair multiplicities across hyperedges accumulate into the coefficient.
  std::map<std::pair<int, int>, double> pair_counts;
  for (const auto& e : h.hyperedges()) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        pair_counts[{e[a], e[b]}] += 1.0;
      }
    }
  }
  std::vector<std::vector<int>> terms;
  std::vector<double> coeffs;
  terms.reserve(pair_counts.size());
  for (const auto& [pr, count] : pair_counts) {
    terms.push_back({pr.first, pr.second});
    coeffs.push_back(count);
  }

  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kColoring;
  loss.k = k;
  loss.pubo = OneHotPubo(Hypergraph(h.num_vertices(), std::move(terms)), std::move(coeffs));
  loss.uses_color_head = true;
  loss.problem = make_instance(ProblemKind::kStrongColoring, h, k);
  return loss;
}

CompiledLoss compile_hypergraph_proper_coloring(const Hypergraph& h, int k) {
  if (k == 0) k = 2;
  if (k < 2) throw std::invalid_argument("proper coloring needs at least two colors");
  for (const auto& e : h.hyperedges()) {
    if (e.size() < 2) {
      throw std::invalid_argument(
          "proper coloring is infeasible: a singleton hyperedge is always monochromatic");
    }
  }

  std::vector<double> coeffs(h.num_hyperedges(), 1.0);
  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kColoring;
  loss.k = k;
  loss.pubo = OneHotPubo(h, std::move(coeffs));
  loss.uses_color_head = true;
  loss.problem = make_instance(ProblemKind::kProperColoring, h, k);
  return loss;
}

CompiledLoss compile_graph_partitioning(const Graph& g, int k, double alpha, double beta,
                                        bool normalize_balance) {
  if (k < 1) throw std::invalid_argument("partitioning needs at least one block");

  std::vector<std::vector<int>> terms;
  std::vector<double> coeffs;
  terms.reserve(g.num_edges());
  for (int j = 0; j < g.num_edges(); ++j) {
    auto [u, v] = g.edge(j);
    terms.push_back({u, v});
    coeffs.push_back(-2.0);
  }

  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kPartition;
  loss.k = k;
  loss.pubo = OneHotPubo(Hypergraph(g.num_vertices(), std::move(terms)), std::move(coeffs));
  loss.constant = 2.0 * g.num_edges();
  loss.alpha = alpha;
  loss.beta = beta;
  loss.normalize_balance = normalize_balance;
  loss.problem = make_instance(ProblemKind::kGraphPartition, g.as_hypergraph(), k);
  loss.problem.alpha = alpha;
  loss.problem.beta = beta;
  loss.problem.normalize_balance = normalize_balance;
  return loss;
}

CompiledLoss compile_hypergraph_partitioning(const Hypergraph& h, int k, double alpha, double beta,
                                             bool normalize_balance) {
  if (k < 1) throw std::invalid_argument("partitioning needs at least one block");

  std::vector<double> coeffs(h.num_hyperedges(), -1.0);
  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kPartition;
  loss.k = k;
  loss.pubo = OneHotPubo(h, std::move(coeffs));
  loss.constant = static_cast<double>(h.num_hyperedges());
  loss.alpha = alpha;
  loss.beta = beta;
  loss.normalize_balance = normalize_balance;
  loss.problem = make_instance(ProblemKind::kHypergraphPartition, h, k);
  loss.problem.alpha = alpha;
  loss.problem.beta = beta;
  loss.problem.normalize_balance = normalize_balance;
  return loss;
}

CompiledLoss compile_maxcut(const Graph& g) {
  const int n = g.num_vertices();
  Tensor q(n, n);
  for (int j = 0; j < g.num_edges(); ++j) {
    auto [u, v] = g.edge(j);
    q.at(u, v) += 2.0;
    q.at(u, u) -= 1.0;
    q.at(v, v) -= 1.0;
  }

  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kMaxcut;
  loss.k = 2;
  loss.qubo = OneHotQubo(n, std::move(q));
  loss.has_qubo = true;
  loss.pubo = pubo_from_qubo(loss.qubo);
  loss.problem = make_instance(ProblemKind::kMaxCut, g.as_hypergraph(), 2);
  return loss;
}

CompiledLoss compile_mis(const Graph& g, double penalty) {
  if (penalty <= 1.0) {
    throw std::invalid_argument("MIS penalty must exceed 1 to dominate the vertex reward");
  }
  const int n = g.num_vertices();
  Tensor q(n, n);
  for (int i = 0; i < n; ++i) q.at(i, i) = -1.0;
  for (int j = 0; j < g.num_edges(); ++j) {
    auto [u, v] = g.edge(j);
    q.at(u, v) += penalty;
  }

  CompiledLoss loss;
  loss.objective_kind = ObjectiveKind::kMis;
  loss.k = 2;
  loss.qubo = OneHotQubo(n, std::move(q));
  loss.has_qubo = true;
  loss.pubo = pubo_from_qubo(loss.qubo);
  loss.mis_column_only = true;
  loss.problem = make_instance(ProblemKind::kMis, g.as_hypergraph(), 2);
  loss.problem.mis_penalty = penalty;
  return loss;
}

CompiledLoss compile(const ProblemInstance& p) {
  switch (p.kind) {
    case ProblemKind::kGraphColoring:
      return compile_graph_coloring(p.graph(), p.k);
    case ProblemKind::kStrongColoring:
      return compile_hypergraph_strong_coloring(p.structure, p.k);
    case ProblemKind::kProperColoring:
      return compile_hypergraph_proper_coloring(p.structure, p.k);
    case ProblemKind::kGraphPartition:
      return compile_graph_partitioning(p.graph(), p.k == 0 ? 2 : p.k, p.alpha, p.beta,
                                        p.normalize_balance);
    case ProblemKind::kHypergraphPartition:
      return compile_hypergraph_partitioning(p.structure, p.k == 0 ? 2 : p.k, p.alpha, p.beta,
                                             p.normalize_balance);
    case ProblemKind::kMaxCut:
      return compile_maxcut(p.graph());
    case ProblemKind::kMis:
      return compile_mis(p.graph(), p.mis_penalty);
  }
  throw std::logic_error("unreachable");
}

double balance_value(const std::vector<int>& group_sizes, int n, int k, bool normalize) {
  const double target = static_cast<double>(n) / k;
  double sum = 0.0;
  for (int s : group_sizes) {
    const double d = s - target;
    sum += d * d;
  }
  if (normalize && n > 0) {
    sum /= static_cast<double>(n) * n / k;
  }
  return sum;
}

HardEval evaluate_hard(const CompiledLoss& loss, const std::vector<int>& labels) {
  Assignment a = Assignment::hard(labels, loss.k);
  HardEval out;

  std::vector<int> sizes(loss.k, 0);
  for (int lab : labels) ++sizes[lab];
  std::set<int> used(labels.begin(), labels.end());
  out.colors_used = static_cast<int>(used.size());

  switch (loss.objective_kind) {
    case ObjectiveKind::kColoring: {
      const double conflicts = eval_pubo_naive(loss.pubo, a);
      out.constraint_count = static_cast<long>(std::llround(conflicts));
      out.feasible = out.constraint_count == 0;
      out.objective = out.colors_used;
      break;
    }
    case ObjectiveKind::kPartition: {
      const double cut_term = loss.constant + eval_pubo_naive(loss.pubo, a);
      const bool graph_cut = loss.problem.kind == ProblemKind::kGraphPartition;
      out.constraint_count = static_cast<long>(std::llround(graph_cut ? cut_term / 2.0 : cut_term));
      out.balance = loss.beta * balance_value(sizes, a.num_vertices(), loss.k,
                                              loss.normalize_balance);
      out.objective = loss.alpha * cut_term + out.balance;
      out.feasible = true;
      break;
    }
    case ObjectiveKind::kMaxcut: {
      const double value = eval_qubo_vectorized(loss.qubo, a);
      out.objective = value;
      out.constraint_count = static_cast<long>(std::llround(-value / 2.0));  // cut edges
      out.feasible = true;
      break;
    }
    case ObjectiveKind::kMis: {
      // Column 0 is the set: evaluate the binary quadratic form on it.
      long size = 0;
      for (int lab : labels) size += lab == 0;
      Tensor col(a.num_vertices(), 1);
      for (int i = 0; i < a.num_vertices(); ++i) col.at(i, 0) = a.x.at(i, 0);
      double value = 0.0;
      for (int i = 0; i < loss.qubo.n; ++i) {
        value += loss.qubo.q.at(i, i) * col.at(i, 0);
        for (int j = i + 1; j < loss.qubo.n; ++j) {
          const double qij = loss.qubo.q.at(i, j);
          if (qij != 0.0) value += qij * col.at(i, 0) * col.at(j, 0);
        }
      }
      out.objective = value;
      out.mis_size = size;
      const double viol = (value + size) / loss.problem.mis_penalty;
      out.constraint_count = static_cast<long>(std::llround(viol));
      out.feasible = out.constraint_count == 0;
      break;
    }
  }
  return out;
}

ChromaticReport chromatic_report(const CompiledLoss& loss, const std::vector<int>& labels) {
  if (loss.objective_kind != ObjectiveKind::kColoring) {
    throw std::invalid_argument("chromatic_report needs a coloring loss");
  }
  HardEval ev = evaluate_hard(loss, labels);
  return {ev.colors_used, ev.constraint_count};
}

LossGraphContext make_loss_graph_context(const CompiledLoss& loss) {
  LossGraphContext ctx;
  ctx.num_vertices = loss.pubo.terms.num_vertices();
  ctx.use_qubo = loss.has_qubo;
  if (loss.has_qubo) {
    ctx.qubo_ctx = make_qubo_loss_context(loss.qubo);
  } else {
    ctx.pubo_ctx = make_pubo_loss_context(loss.pubo);
  }
  return ctx;
}

ValueId build_loss_node(Tape& tape, const CompiledLoss& loss, const LossGraphContext& ctx,
                        ValueId x, ValueId y, const LossWeights& w) {
  ValueId total;

  ValueId base;
  if (ctx.use_qubo) {
    ValueId operand = loss.mis_column_only ? tape.slice_cols(x, 0, 1) : x;
    base = qubo_loss_node(tape, ctx.qubo_ctx, operand);
  } else {
    base = pubo_loss_node(tape, ctx.pubo_ctx, x, loss.k);
  }
  const double base_weight =
      loss.objective_kind == ObjectiveKind::kPartition
          ? loss.alpha
          : (loss.objective_kind == ObjectiveKind::kColoring ? w.pubo_weight : 1.0);
  total = base_weight == 1.0 ? base : tape.scale(base, base_weight);

  if (loss.uses_color_head) {
    if (!y.valid()) {
      throw std::invalid_argument("coloring loss needs the color head output");
    }
    total = tape.add(total, tape.reduce_sum(y));
    if (w.usage_weight != 0.0) {
      // sum_i sum_c X_ic * (1 - y_c): colors in use but not "paid for".
      ValueId one_minus_y = tape.affine(y, -1.0, 1.0);
      ValueId usage = tape.reduce_sum(tape.mul(x, one_minus_y));
      total = tape.add(total, tape.scale(usage, w.usage_weight));
    }
  }

  if (loss.objective_kind == ObjectiveKind::kPartition && loss.beta != 0.0) {
    const int n = ctx.num_vertices;
    ValueId sizes = tape.col_sum(x);
    ValueId dev = tape.affine(sizes, 1.0, -static_cast<double>(n) / loss.k);
    ValueId sq = tape.reduce_sum(tape.mul(dev, dev));
    double weight = loss.beta;
    if (loss.normalize_balance && n > 0) {
      weight *= static_cast<double>(loss.k) / (static_cast<double>(n) * n);
    }
    total = tape.add(total, tape.scale(sq, weight));
  }

  return total;
}

}  // namespace kgroup

#include "kgroup/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace kgroup {

namespace {

std::vector<int> sizes_of(const std::vector<int>& labels, int k) {
  std::vector<int> sizes(k, 0);
  for (int lab : labels) ++sizes[lab];
  return sizes;
}

void fill_balance_stats(VerifyReport& r, int n, int k) {
  const double mean = static_cast<double>(n) / k;
  int mx = 0;
  double sq = 0.0;
  for (int s : r.group_sizes) {
    mx = std::max(mx, s);
    sq += (s - mean) * (s - mean);
  }
  r.b1 = mean > 0 ? mx / mean - 1.0 : 0.0;
  r.b2 = std::sqrt(sq / k);
}

}  // namespace

VerifyReport verify(const ProblemInstance& p, const std::vector<int>& labels) {
  const int n = p.structure.num_vertices();
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("assignment length does not match vertex count");
  }
  const int k = p.k;
  for (int lab : labels) {
    if (lab < 0 || lab >= k) {
      throw std::invalid_argument("label out of range");
    }
  }

  VerifyReport r;
  r.group_sizes = sizes_of(labels, k);
  fill_balance_stats(r, n, k);
  std::set<int> used(labels.begin(), labels.end());
  r.colors_used = static_cast<int>(used.size());

  switch (p.kind) {
    case ProblemKind::kGraphColoring:
    case ProblemKind::kStrongColoring: {
      // Same-colored vertex pairs sharing a hyperedge, counted once per
      // hyperedge they share (plain edges are 2-vertex hyperedges).
      long conflicts = 0;
      for (const auto& e : p.structure.hyperedges()) {
        for (std::size_t a = 0; a < e.size(); ++a) {
          for (std::size_t b = a + 1; b < e.size(); ++b) {
            conflicts += labels[e[a]] == labels[e[b]];
          }
        }
      }
      r.violated_terms = conflicts;
      r.feasible = conflicts == 0;
      r.objective = r.colors_used;
      break;
    }
    case ProblemKind::kProperColoring: {
      long mono = 0;
      for (const auto& e : p.structure.hyperedges()) {
        bool all_same = true;
        for (int v : e) all_same = all_same && labels[v] == labels[e[0]];
        mono += all_same;
      }
      r.violated_terms = mono;
      r.feasible = mono == 0;
      r.objective = r.colors_used;
      break;
    }
    case ProblemKind::kGraphPartition:
    case ProblemKind::kHypergraphPartition: {
      long cut = 0;
      for (const auto& e : p.structure.hyperedges()) {
        bool all_same = true;
        for (int v : e) all_same = all_same && labels[v] == labels[e[0]];
        cut += !all_same;
      }
      r.cut_count = cut;
      r.feasible = true;
      const double mean = static_cast<double>(n) / k;
      double raw = 0.0;
      for (int s : r.group_sizes) raw += (s - mean) * (s - mean);
      if (p.normalize_balance && n > 0) raw /= static_cast<double>(n) * n / k;
      r.balance = p.beta * raw;
      const double per_edge = p.kind == ProblemKind::kGraphPartition ? 2.0 : 1.0;
      r.objective = p.alpha * per_edge * cut + r.balance;
      break;
    }
    case ProblemKind::kMaxCut: {
      long cut = 0;
      for (const auto& e : p.structure.hyperedges()) {
        cut += labels[e[0]] != labels[e[1]];
      }
      r.cut_count = cut;
      r.feasible = true;
      r.objective = -2.0 * cut;
      break;
    }
    case ProblemKind::kMis: {
      long size = 0;
      for (int lab : labels) size += lab == 0;
      long violated = 0;
      for (const auto& e : p.structure.hyperedges()) {
        violated += labels[e[0]] == 0 && labels[e[1]] == 0;
      }
      r.mis_size = size;
      r.violated_terms = violated;
      r.feasible = violated == 0;
      r.objective = -static_cast<double>(size) + p.mis_penalty * violated;
      break;
    }
  }
  return r;
}

namespace {

// Lexicographic ranking: feasibility first, then fewest violations, then the
// objective. Used so "best" means the same thing here and in the trainer.
bool better(const VerifyReport& a, const VerifyReport& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible && a.violated_terms != b.violated_terms) {
    return a.violated_terms < b.violated_terms;
  }
  return a.objective < b.objective;
}

}  // namespace

BruteForceResult brute_force(const CompiledLoss& loss, std::uint64_t limit) {
  const int n = loss.problem.structure.num_vertices();
  const int k = loss.k;
  if (n == 0) {
    return {std::vector<int>{}, 0.0, true, 0};
  }

  // Relabeling groups leaves every objective except MIS invariant, so vertex
  // 0 can be pinned to group 0.
  const bool symmetric = loss.objective_kind != ObjectiveKind::kMis;
  const int free_vertices = symmetric ? n - 1 : n;

  double states_d = 1.0;
  for (int i = 0; i < free_vertices; ++i) {
    states_d *= k;
    if (states_d > static_cast<double>(limit)) {
      throw std::runtime_error("brute force search space " + std::to_string(n) + " vertices x " +
                               std::to_string(k) + " groups exceeds limit of " +
                               std::to_string(limit) + " states");
    }
  }

  std::vector<int> labels(n, 0);
  BruteForceResult best;
  VerifyReport best_report;
  bool have_best = false;
  std::uint64_t visited = 0;

  const int start = symmetric ? 1 : 0;
  while (true) {
    ++visited;
    VerifyReport r = verify(loss.problem, labels);
    if (!have_best || better(r, best_report)) {
      best_report = r;
      best.labels = labels;
      have_best = true;
    }
    // Odometer increment over the free digits.
    int pos = n - 1;
    while (pos >= start && labels[pos] == k - 1) {
      labels[pos] = 0;
      --pos;
    }
    if (pos < start) break;
    ++labels[pos];
  }

  best.objective = best_report.objective;
  best.found_feasible = best_report.feasible;
  best.states_visited = visited;
  return best;
}

DsaturResult dsatur_coloring(const Graph& g) {
  const int n = g.num_vertices();
  const auto adj = g.adjacency_lists();
  std::vector<int> degree(n);
  for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(adj[v].size());

  std::vector<int> labels(n, -1);
  std::vector<std::set<int>> neighbor_colors(n);

  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (labels[v] != -1) continue;
      if (pick == -1) {
        pick = v;
        continue;
      }
      const auto sat_v = static_cast<int>(neighbor_colors[v].size());
      const auto sat_p = static_cast<int>(neighbor_colors[pick].size());
      if (sat_v > sat_p || (sat_v == sat_p && degree[v] > degree[pick])) {
        pick = v;  // equal saturation and degree keeps the lower index
      }
    }
    int color = 0;
    while (neighbor_colors[pick].count(color)) ++color;
    labels[pick] = color;
    for (int u : adj[pick]) {
      if (labels[u] == -1) neighbor_colors[u].insert(color);
    }
  }

  int colors = 0;
  for (int lab : labels) colors = std::max(colors, lab + 1);
  return {std::move(labels), colors};
}

}  // namespace kgroup

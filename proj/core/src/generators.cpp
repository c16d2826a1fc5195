#include "kgroup/generators.hpp"

#include <random>
#include <set>
#include <stdexcept>

namespace kgroup {

Graph random_graph(int num_vertices, int num_edges, std::uint64_t seed) {
  if (num_vertices < 0 || num_edges < 0) {
    throw std::invalid_argument("negative size");
  }
  const long long max_edges = static_cast<long long>(num_vertices) * (num_vertices - 1) / 2;
  if (num_edges > max_edges) {
    throw std::invalid_argument("requested " + std::to_string(num_edges) + " edges, only " +
                                std::to_string(max_edges) + " distinct pairs exist");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, num_vertices - 1);
  std::set<std::pair<int, int>> chosen;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(num_edges);
  while (static_cast<int>(edges.size()) < num_edges) {
    int u = pick(rng);
    int v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (chosen.insert({u, v}).second) {
      edges.emplace_back(u, v);
    }
  }
  return Graph(num_vertices, edges);
}

Hypergraph random_hypergraph(int num_vertices, int num_hyperedges, int min_size, int max_size,
                             std::uint64_t seed) {
  if (min_size < 1 || max_size < min_size) {
    throw std::invalid_argument("hyperedge size range is empty");
  }
  if (max_size > num_vertices) {
    throw std::invalid_argument("hyperedges cannot exceed the vertex count");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(min_size, max_size);
  std::uniform_int_distribution<int> pick(0, num_vertices - 1);
  std::vector<std::vector<int>> edges;
  edges.reserve(num_hyperedges);
  for (int j = 0; j < num_hyperedges; ++j) {
    const int size = size_dist(rng);
    std::set<int> members;
    while (static_cast<int>(members.size()) < size) {
      members.insert(pick(rng));
    }
    edges.emplace_back(members.begin(), members.end());
  }
  return Hypergraph(num_vertices, std::move(edges));
}

}  // namespace kgroup

#pragma once

#include <cstdint>
#include <string>

#include "kgroup/hypergraph.hpp"

namespace kgroup {

// Stamped into benchmark outputs so regenerated instances can be traced to
// the generator revision that produced them.
inline constexpr const char* kGeneratorVersion = "gen-1";

// Uniform random simple graph with exactly `num_edges` distinct edges,
// sampled without replacement. Deterministic in `seed`. Throws if more edges
// are requested than distinct vertex pairs exist.
Graph random_graph(int num_vertices, int num_edges, std::uint64_t seed);

// Random hypergraph with `num_hyperedges` hyperedges whose sizes are drawn
// uniformly from [min_size, max_size]; each hyperedge samples distinct
// vertices. Deterministic in `seed`.
Hypergraph random_hypergraph(int num_vertices, int num_hyperedges, int min_size, int max_size,
                             std::uint64_t seed);

}  // namespace kgroup

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kgroup/tensor.hpp"

namespace kgroup {

// Error raised by the text parsers. line() is 1-based and refers to the
// offending line of the input stream.
class parse_error : public std::runtime_error {
 public:
  parse_error(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Vertex-set system over vertices 0..n-1. Hyperedges are stored in insertion
// order; duplicate hyperedges stay as distinct entries. Within a hyperedge,
// vertices are sorted ascending and deduplicated at construction.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Throws std::invalid_argument on out-of-range vertices or empty edges.
  Hypergraph(int num_vertices, std::vector<std::vector<int>> hyperedges,
             std::vector<double> weights = {});

  int num_vertices() const { return num_vertices_; }
  int num_hyperedges() const { return static_cast<int>(hyperedges_.size()); }

  const std::vector<std::vector<int>>& hyperedges() const { return hyperedges_; }
  const std::vector<int>& hyperedge(int j) const { return hyperedges_[j]; }

  // Empty means unweighted (all weights 1).
  const std::vector<double>& weights() const { return weights_; }

  int max_hyperedge_size() const;

  // Number of hyperedges each vertex belongs to.
  std::vector<int> vertex_degrees() const;

  bool operator==(const Hypergraph&) const = default;

 private:
  int num_vertices_ = 0;
  std::vector<std::vector<int>> hyperedges_;
  std::vector<double> weights_;
};

// Undirected simple-edge view: a hypergraph whose hyperedges all have exactly
// two vertices. Self-loops are rejected; duplicate edges are kept if the
// caller supplies them (the edge-list parser deduplicates).
class Graph {
 public:
  Graph() = default;
  Graph(int num_vertices, const std::vector<std::pair<int, int>>& edges);

  int num_vertices() const { return h_.num_vertices(); }
  int num_edges() const { return h_.num_hyperedges(); }
  std::pair<int, int> edge(int j) const {
    const auto& e = h_.hyperedge(j);
    return {e[0], e[1]};
  }
  const Hypergraph& as_hypergraph() const { return h_; }

  std::vector<int> degrees() const { return h_.vertex_degrees(); }
  int max_degree() const;
  std::vector<std::vector<int>> adjacency_lists() const;

  bool operator==(const Graph&) const = default;

 private:
  Hypergraph h_;
};

// Dense |V| x |E| 0/1 incidence matrix; entry (v, e) = 1 iff v is in e.
// An empty hyperedge list yields a |V| x 0 matrix.
Tensor incidence_matrix(const Hypergraph& h);

// Sparse companion of the incidence matrix: for each vertex, the sorted list
// of hyperedges it belongs to. The per-hyperedge side is h.hyperedge(j).
std::vector<std::vector<int>> vertex_incidence_lists(const Hypergraph& h);

// Graph on the same vertices with one edge per unordered vertex pair that
// co-occurs in at least one hyperedge. Pairs repeated across hyperedges are
// merged. Edges come out sorted lexicographically.
Graph clique_expansion(const Hypergraph& h);

// hMETIS-style text format. Header line "<|E|> <|V|>" with an optional third
// format token (only the unweighted format, absent or "0", is accepted), then
// one line of 1-based vertex indices per hyperedge. '%' starts a comment
// line. Parsed vertices are converted to 0-based indices.
Hypergraph parse_hgr(std::istream& in);
Hypergraph parse_hgr(const std::string& text);

// Canonical serialization: LF line endings, single spaces, ASCII decimal,
// vertices 1-based and ascending. parse_hgr(serialize_hgr(h)) == h, and the
// round trip is byte-identical on canonical files.
std::string serialize_hgr(const Hypergraph& h);

// Edge list: one "u v" pair of 0-based vertex indices per line, '#' comment
// lines, optional "p <num_vertices>" header. Without a header the vertex
// count is max index + 1. Self-loops are errors; duplicate edges (in either
// orientation) are dropped after the first occurrence.
Graph parse_edgelist(std::istream& in);
Graph parse_edgelist(const std::string& text);

// Canonical serialization: "p <n>" header then one "u v" line per edge with
// u < v, in stored edge order.
std::string serialize_edgelist(const Graph& g);

// File loaders; format is "hgr", "edgelist", or "auto" (by extension:
// .hgr -> hgr, anything else -> edgelist).
Hypergraph load_hypergraph(const std::string& path, const std::string& format = "auto");
Graph load_graph(const std::string& path, const std::string& format = "auto");

}  // namespace kgroup

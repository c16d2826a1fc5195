#include "kgroup/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace kgroup {

namespace {

std::vector<int> canonical_edge(int num_vertices, std::vector<int> e) {
  for (int v : e) {
    if (v < 0 || v >= num_vertices) {
      throw std::invalid_argument("hyperedge vertex " + std::to_string(v) +
                                  " out of range [0, " + std::to_string(num_vertices) + ")");
    }
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  if (e.empty()) {
    throw std::invalid_argument("empty hyperedge");
  }
  return e;
}

}  // namespace

Hypergraph::Hypergraph(int num_vertices, std::vector<std::vector<int>> hyperedges,
                       std::vector<double> weights)
    : num_vertices_(num_vertices), weights_(std::move(weights)) {
  if (num_vertices < 0) {
    throw std::invalid_argument("negative vertex count");
  }
  if (!weights_.empty() && weights_.size() != hyperedges.size()) {
    throw std::invalid_argument("weight count does not match hyperedge count");
  }
  for (double w : weights_) {
    if (w < 0) throw std::invalid_argument("negative hyperedge weight");
  }
  hyperedges_.reserve(hyperedges.size());
  for (auto& e : hyperedges) {
    hyperedges_.push_back(canonical_edge(num_vertices, std::move(e)));
  }
}

int Hypergraph::max_hyperedge_size() const {
  int m = 0;
  for (const auto& e : hyperedges_) m = std::max(m, static_cast<int>(e.size()));
  return m;
}

std::vector<int> Hypergraph::vertex_degrees() const {
  std::vector<int> deg(num_vertices_, 0);
  for (const auto& e : hyperedges_) {
    for (int v : e) ++deg[v];
  }
  return deg;
}

Graph::Graph(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> pairs;
  pairs.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u == v) {
      throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    }
    pairs.push_back({u, v});
  }
  h_ = Hypergraph(num_vertices, std::move(pairs));
}

int Graph::max_degree() const {
  auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<std::vector<int>> Graph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(num_vertices());
  for (int j = 0; j < num_edges(); ++j) {
    auto [u, v] = edge(j);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

Tensor incidence_matrix(const Hypergraph& h) {
  Tensor m(h.num_vertices(), h.num_hyperedges());
  for (int j = 0; j < h.num_hyperedges(); ++j) {
    for (int v : h.hyperedge(j)) m.at(v, j) = 1.0;
  }
  return m;
}

std::vector<std::vector<int>> vertex_incidence_lists(const Hypergraph& h) {
  std::vector<std::vector<int>> lists(h.num_vertices());
  for (int j = 0; j < h.num_hyperedges(); ++j) {
    for (int v : h.hyperedge(j)) lists[v].push_back(j);
  }
  return lists;
}

Graph clique_expansion(const Hypergraph& h) {
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : h.hyperedges()) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        pairs.emplace(e[a], e[b]);
      }
    }
  }
  std::vector<std::pair<int, int>> edges(pairs.begin(), pairs.end());
  return Graph(h.num_vertices(), edges);
}

namespace {

// Strips a trailing '\r' so CRLF input parses; the serializers always emit LF.
bool next_line(std::istream& in, std::string& line, int& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool is_comment(const std::string& line, char marker) {
  for (char ch : line) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == marker;
  }
  return false;  // blank lines are not comments
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

std::vector<long long> parse_ints(const std::string& line, int lineno) {
  std::vector<long long> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw parse_error(lineno, "expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) {
      throw parse_error(lineno, "expected integer, got '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Hypergraph parse_hgr(std::istream& in) {
  std::string line;
  int lineno = 0;

  long long num_edges = -1, num_vertices = -1;
  while (next_line(in, line, lineno)) {
    if (is_comment(line, '%') || is_blank(line)) continue;
    auto header = parse_ints(line, lineno);
    if (header.size() != 2 && header.size() != 3) {
      throw parse_error(lineno, "header must be '<num_hyperedges> <num_vertices> [fmt]'");
    }
    if (header.size() == 3 && header[2] != 0) {
      throw parse_error(lineno, "unsupported fmt token " + std::to_string(header[2]) +
                                    " (only unweighted input is accepted)");
    }
    num_edges = header[0];
    num_vertices = header[1];
    if (num_edges < 0 || num_vertices < 0) {
      throw parse_error(lineno, "negative counts in header");
    }
    break;
  }
  if (num_edges < 0) {
    throw parse_error(lineno == 0 ? 1 : lineno, "missing header line");
  }

  std::vector<std::vector<int>> edges;
  edges.reserve(static_cast<std::size_t>(num_edges));
  while (static_cast<long long>(edges.size()) < num_edges) {
    if (!next_line(in, line, lineno)) {
      throw parse_error(lineno, "expected " + std::to_string(num_edges) + " hyperedges, got " +
                                    std::to_string(edges.size()));
    }
    if (is_comment(line, '%')) continue;
    auto verts = parse_ints(line, lineno);
    if (verts.empty()) {
      throw parse_error(lineno, "empty hyperedge");
    }
    std::vector<int> e;
    e.reserve(verts.size());
    for (long long v : verts) {
      if (v < 1 || v > num_vertices) {
        throw parse_error(lineno, "vertex index " + std::to_string(v) + " out of range [1, " +
                                      std::to_string(num_vertices) + "]");
      }
      e.push_back(static_cast<int>(v - 1));
    }
    std::vector<int> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw parse_error(lineno, "repeated vertex in hyperedge");
    }
    edges.push_back(std::move(e));
  }
  while (next_line(in, line, lineno)) {
    if (is_comment(line, '%') || is_blank(line)) continue;
    throw parse_error(lineno, "unexpected content after " + std::to_string(num_edges) +
                                  " hyperedges");
  }
  return Hypergraph(static_cast<int>(num_vertices), std::move(edges));
}

Hypergraph parse_hgr(const std::string& text) {
  std::istringstream iss(text);
  return parse_hgr(iss);
}

std::string serialize_hgr(const Hypergraph& h) {
  std::string out;
  out += std::to_string(h.num_hyperedges());
  out += ' ';
  out += std::to_string(h.num_vertices());
  out += '\n';
  for (const auto& e : h.hyperedges()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(e[i] + 1);
    }
    out += '\n';
  }
  return out;
}

Graph parse_edgelist(std::istream& in) {
  std::string line;
  int lineno = 0;

  long long declared_vertices = -1;
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> seen;
  long long max_index = -1;

  while (next_line(in, line, lineno)) {
    if (is_comment(line, '#') || is_blank(line)) continue;

    std::istringstream iss(line);
    std::string first;
    iss >> first;
    if (first == "p") {
      if (declared_vertices >= 0) {
        throw parse_error(lineno, "duplicate 'p' header");
      }
      if (!edges.empty()) {
        throw parse_error(lineno, "'p' header must precede edges");
      }
      std::string count;
      if (!(iss >> count)) {
        throw parse_error(lineno, "'p' header needs a vertex count");
      }
      auto vals = parse_ints(count, lineno);
      declared_vertices = vals[0];
      if (declared_vertices < 0) {
        throw parse_error(lineno, "negative vertex count");
      }
      std::string extra;
      if (iss >> extra) {
        throw parse_error(lineno, "unexpected token '" + extra + "' after vertex count");
      }
      continue;
    }

    auto vals = parse_ints(line, lineno);
    if (vals.size() != 2) {
      throw parse_error(lineno, "expected 'u v' edge line");
    }
    long long u = vals[0], v = vals[1];
    if (u < 0 || v < 0) {
      throw parse_error(lineno, "negative vertex index");
    }
    if (u == v) {
      throw parse_error(lineno, "self-loop on vertex " + std::to_string(u));
    }
    if (declared_vertices >= 0 && (u >= declared_vertices || v >= declared_vertices)) {
      throw parse_error(lineno, "vertex index " + std::to_string(std::max(u, v)) +
                                    " out of range [0, " + std::to_string(declared_vertices) + ")");
    }
    max_index = std::max({max_index, u, v});
    std::pair<int, int> key{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
    if (seen.insert(key).second) {
      edges.emplace_back(key);
    }
  }

  long long n = declared_vertices >= 0 ? declared_vertices : max_index + 1;
  return Graph(static_cast<int>(n), edges);
}

Graph parse_edgelist(const std::string& text) {
  std::istringstream iss(text);
  return parse_edgelist(iss);
}

std::string serialize_edgelist(const Graph& g) {
  std::string out = "p " + std::to_string(g.num_vertices()) + "\n";
  for (int j = 0; j < g.num_edges(); ++j) {
    auto [u, v] = g.edge(j);
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

namespace {

std::string detect_format(const std::string& path, const std::string& format) {
  if (format != "auto") {
    if (format != "hgr" && format != "edgelist") {
      throw std::invalid_argument("unknown format '" + format + "' (hgr, edgelist, auto)");
    }
    return format;
  }
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  return ext == "hgr" ? "hgr" : "edgelist";
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  return in;
}

}  // namespace

Hypergraph load_hypergraph(const std::string& path, const std::string& format) {
  auto in = open_or_throw(path);
  if (detect_format(path, format) == "hgr") {
    return parse_hgr(in);
  }
  return parse_edgelist(in).as_hypergraph();
}

Graph load_graph(const std::string& path, const std::string& format) {
  auto in = open_or_throw(path);
  if (detect_format(path, format) == "edgelist") {
    return parse_edgelist(in);
  }
  Hypergraph h = parse_hgr(in);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(h.num_hyperedges());
  for (const auto& e : h.hyperedges()) {
    if (e.size() != 2) {
      throw std::runtime_error("hgr input is not 2-uniform; this problem needs a graph");
    }
    edges.emplace_back(e[0], e[1]);
  }
  return Graph(h.num_vertices(), edges);
}

}  // namespace kgroup

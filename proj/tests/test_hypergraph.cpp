#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "kgroup/generators.hpp"
#include "kgroup/hypergraph.hpp"
#include "test_util.hpp"

using namespace kgroup;

TEST_CASE("hypergraph normalizes hyperedges") {
  Hypergraph h(4, {{2, 0, 2}, {3, 1}});
  CHECK(h.num_vertices() == 4);
  CHECK(h.num_hyperedges() == 2);
  CHECK(h.hyperedge(0) == std::vector<int>{0, 2});  // sorted, deduplicated
  CHECK(h.hyperedge(1) == std::vector<int>{1, 3});
  CHECK(h.max_hyperedge_size() == 2);
  CHECK(h.vertex_degrees() == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("hypergraph keeps duplicate hyperedges") {
  Hypergraph h(3, {{0, 1}, {1, 0}});
  CHECK(h.num_hyperedges() == 2);
  CHECK(h.hyperedge(0) == h.hyperedge(1));
}

TEST_CASE("hypergraph rejects bad input") {
  CHECK_THROWS_AS(Hypergraph(2, {{0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(2, {{-1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(2, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(2, {{0, 1}}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Hypergraph(2, {{0, 1}}, {-1.0}), std::invalid_argument);
}

TEST_CASE("graph rejects self-loops") {
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("graph adjacency and degrees") {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
  CHECK(g.max_degree() == 3);
  auto adj = g.adjacency_lists();
  CHECK(adj[0] == std::vector<int>{1, 2, 3});
  CHECK(adj[1] == std::vector<int>{0, 2});
}

TEST_CASE("incidence matrix matches membership") {
  Hypergraph h(4, {{0, 1}, {0, 2, 3}, {1, 2, 3}});
  Tensor m = incidence_matrix(h);
  REQUIRE(m.rows() == 4);
  REQUIRE(m.cols() == 3);
  for (int v = 0; v < 4; ++v) {
    for (int e = 0; e < 3; ++e) {
      const auto& edge = h.hyperedge(e);
      bool member = std::find(edge.begin(), edge.end(), v) != edge.end();
      CHECK(m.at(v, e) == (member ? 1.0 : 0.0));
    }
  }
  auto lists = vertex_incidence_lists(h);
  CHECK(lists[0] == std::vector<int>{0, 1});
  CHECK(lists[3] == std::vector<int>{1, 2});
}

TEST_CASE("clique expansion merges repeated pairs") {
  Hypergraph h(4, {{0, 1, 2}, {1, 2, 3}});
  Graph g = clique_expansion(h);
  CHECK(g.num_edges() == 5);  // 01 02 12 13 23, the shared 12 merged
  std::set<std::pair<int, int>> edges;
  for (int j = 0; j < g.num_edges(); ++j) edges.insert(g.edge(j));
  CHECK(edges == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
}

TEST_CASE("hgr parse and serialize round-trip") {
  std::string text = "3 4\n1 2\n1 3 4\n2 3 4\n";
  std::istringstream in(text);
  Hypergraph h = parse_hgr(in);
  CHECK(h.num_vertices() == 4);
  CHECK(h.num_hyperedges() == 3);
  CHECK(h.hyperedge(0) == std::vector<int>{0, 1});
  CHECK(h.hyperedge(1) == std::vector<int>{0, 2, 3});
  CHECK(serialize_hgr(h) == text);

  // Byte-identical round-trip from the serialized form.
  std::istringstream again(serialize_hgr(h));
  CHECK(serialize_hgr(parse_hgr(again)) == text);
}

TEST_CASE("hgr parser tolerates comments, CRLF, and blank padding") {
  std::istringstream in("% header comment\r\n\n2 3\r\n% body comment\n1 2\n2 3\n\n\n");
  Hypergraph h = parse_hgr(in);
  CHECK(h.num_hyperedges() == 2);
  CHECK(h.hyperedge(1) == std::vector<int>{1, 2});
}

TEST_CASE("hgr parser reports 1-based line numbers") {
  std::istringstream in("2 3\n1 2\n");
  try {
    parse_hgr(in);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);  // ran out of hyperedges after the last data line
  }

  std::istringstream dup("1 3\n2 2\n");
  try {
    parse_hgr(dup);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("repeated") != std::string::npos);
  }
}

TEST_CASE("hgr parser rejects malformed input") {
  auto reject = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_hgr(in), parse_error);
  };
  reject("");                    // missing header
  reject("1 2 1\n1 2\n");        // weighted fmt token
  reject("1 2\n0 1\n");          // 0 is out of range in 1-based input
  reject("1 2\n1 3\n");          // vertex beyond header count
  reject("2 2\n1 2\n1 2\n1 2\n");// too many hyperedge lines
  reject("1 2\nx y\n");          // non-integer
}

TEST_CASE("edgelist parse and serialize round-trip") {
  std::string text = "p 5\n0 1\n1 2\n2 3\n3 4\n0 4\n";
  Graph g = parse_edgelist(text);
  CHECK(g.num_vertices() == 5);
  CHECK(g.num_edges() == 5);
  CHECK(serialize_edgelist(g) == text);
  CHECK(serialize_edgelist(parse_edgelist(serialize_edgelist(g))) == text);
}

TEST_CASE("edgelist header is optional and inferred from max index") {
  Graph g = parse_edgelist("0 1\n# comment\n4 2\n");
  CHECK(g.num_vertices() == 5);
  CHECK(g.num_edges() == 2);
}

TEST_CASE("edgelist deduplicates across orientations") {
  Graph g = parse_edgelist("0 1\n1 0\n2 1\n");
  CHECK(g.num_edges() == 2);
  CHECK(g.edge(0) == std::pair<int, int>{0, 1});
  CHECK(g.edge(1) == std::pair<int, int>{1, 2});
}

TEST_CASE("edgelist parser rejects malformed input") {
  auto reject = [](const std::string& text) {
    CHECK_THROWS_AS(parse_edgelist(text), parse_error);
  };
  reject("p 3\np 3\n0 1\n");  // duplicate header
  reject("0 1\np 3\n");       // header after edges
  reject("p 3\n0 3\n");       // out of declared range
  reject("3 3\n");            // self-loop
  reject("0 1 2\n");          // not a pair
  reject("0 -1\n");           // negative index
}

TEST_CASE("loaders pick the format from the extension") {
  Hypergraph h = load_hypergraph(testutil::data_path("toy.hgr"));
  CHECK(h.num_vertices() == 4);
  CHECK(h.num_hyperedges() == 3);

  Graph g = load_graph(testutil::data_path("petersen.edges"));
  CHECK(g.num_vertices() == 10);
  CHECK(g.num_edges() == 15);
  for (int d : g.degrees()) CHECK(d == 3);  // Petersen is cubic

  // A 2-uniform hgr loads as a graph; the toy hypergraph does not.
  CHECK_THROWS(load_graph(testutil::data_path("toy.hgr")));
}

TEST_CASE("random graph generator is seeded and exact") {
  Graph a = random_graph(20, 40, 7);
  Graph b = random_graph(20, 40, 7);
  Graph c = random_graph(20, 40, 8);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.num_edges() == 40);
  std::set<std::pair<int, int>> seen;
  for (int j = 0; j < a.num_edges(); ++j) {
    auto [u, v] = a.edge(j);
    CHECK(u < v);
    CHECK(seen.insert({u, v}).second);  // all edges distinct
  }
  CHECK_THROWS_AS(random_graph(4, 7, 1), std::invalid_argument);  // > C(4,2)
  CHECK(random_graph(4, 6, 1).num_edges() == 6);                  // complete graph edge count
}

TEST_CASE("random hypergraph generator is seeded and in-range") {
  Hypergraph a = random_hypergraph(15, 25, 2, 5, 3);
  Hypergraph b = random_hypergraph(15, 25, 2, 5, 3);
  CHECK(a == b);
  CHECK(a.num_hyperedges() == 25);
  for (int j = 0; j < a.num_hyperedges(); ++j) {
    const auto& e = a.hyperedge(j);
    CHECK(e.size() >= 2);
    CHECK(e.size() <= 5);
    std::set<int> uniq(e.begin(), e.end());
    CHECK(uniq.size() == e.size());
  }
  CHECK_THROWS_AS(random_hypergraph(3, 2, 4, 5, 1), std::invalid_argument);  // size > n
}

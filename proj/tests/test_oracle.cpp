#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kgroup/generators.hpp"
#include "kgroup/hypergraph.hpp"
#include "kgroup/oracle.hpp"
#include "kgroup/problems.hpp"
#include "test_util.hpp"

using namespace kgroup;
namespace tu = kgroup::testutil;

namespace {

ProblemInstance instance_of(ProblemKind kind, const Hypergraph& structure, int k) {
  ProblemInstance p;
  p.kind = kind;
  p.structure = structure;
  p.k = k;
  return p;
}

}  // namespace

TEST_CASE("verifier reports first-principles counts") {
  Graph petersen = load_graph(tu::data_path("petersen.edges"));

  SUBCASE("coloring") {
    ProblemInstance p = instance_of(ProblemKind::kGraphColoring, petersen.as_hypergraph(), 3);
    // A known proper 3-coloring of the Petersen graph.
    std::vector<int> proper{0, 1, 0, 1, 2, 2, 2, 1, 0, 0};
    VerifyReport r = verify(p, proper);
    CHECK(r.feasible);
    CHECK(r.violated_terms == 0);
    CHECK(r.colors_used == 3);

    std::vector<int> mono(10, 0);
    VerifyReport bad = verify(p, mono);
    CHECK_FALSE(bad.feasible);
    CHECK(bad.violated_terms == 15);  // every edge conflicts
    CHECK(bad.colors_used == 1);
  }

  SUBCASE("partition balance metrics") {
    ProblemInstance p = instance_of(ProblemKind::kGraphPartition, petersen.as_hypergraph(), 2);
    std::vector<int> half{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    VerifyReport r = verify(p, half);
    CHECK(r.group_sizes == std::vector<int>{5, 5});
    CHECK(r.b1 == 0.0);
    CHECK(r.b2 == 0.0);
    CHECK(r.cut_count == 5);  // the five spokes

    std::vector<int> lop{0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
    VerifyReport q = verify(p, lop);
    // Sizes (9, 1): B1 = 9/5 - 1, B2 = sqrt(((9-5)^2 + (1-5)^2)/2).
    CHECK(q.b1 == doctest::Approx(0.8));
    CHECK(q.b2 == doctest::Approx(4.0));
  }

  SUBCASE("label out of range is rejected") {
    ProblemInstance p = instance_of(ProblemKind::kGraphColoring, petersen.as_hypergraph(), 3);
    CHECK_THROWS_AS(verify(p, std::vector<int>(10, 3)), std::invalid_argument);
    CHECK_THROWS_AS(verify(p, std::vector<int>{0}), std::invalid_argument);
  }
}

TEST_CASE("brute force certifies known optima") {
  SUBCASE("five-cycle max cut is 4") {
    Graph c5 = load_graph(tu::data_path("c5.edges"));
    BruteForceResult r = brute_force(compile_maxcut(c5));
    CHECK(r.found_feasible);
    CHECK(r.objective == -8.0);  // -2 per cut edge
    CHECK(r.states_visited == 16);  // vertex 0 pinned by symmetry
  }

  SUBCASE("petersen chromatic number is 3") {
    Graph petersen = load_graph(tu::data_path("petersen.edges"));
    CompiledLoss loss3 = compile_graph_coloring(petersen, 3);
    BruteForceResult r3 = brute_force(loss3);
    CHECK(r3.found_feasible);
    CHECK(r3.objective == 3.0);

    CompiledLoss loss2 = compile_graph_coloring(petersen, 2);
    BruteForceResult r2 = brute_force(loss2);
    CHECK_FALSE(r2.found_feasible);  // no proper 2-coloring exists
  }

  SUBCASE("k4 needs four colors") {
    Graph k4 = load_graph(tu::data_path("k4.edges"));
    CHECK_FALSE(brute_force(compile_graph_coloring(k4, 3)).found_feasible);
    BruteForceResult r = brute_force(compile_graph_coloring(k4, 4));
    CHECK(r.found_feasible);
    CHECK(r.objective == 4.0);
  }

  SUBCASE("mis on the five-cycle is 2") {
    Graph c5 = load_graph(tu::data_path("c5.edges"));
    BruteForceResult r = brute_force(compile_mis(c5));
    CHECK(r.found_feasible);
    CHECK(r.objective == -2.0);
    // MIS breaks label symmetry, so the full 2^5 space is enumerated.
    CHECK(r.states_visited == 32);
  }

  SUBCASE("partition of a path prefers the middle cut") {
    Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
    ProblemInstance p = instance_of(ProblemKind::kGraphPartition, path.as_hypergraph(), 2);
    p.beta = 10.0;
    BruteForceResult r = brute_force(compile(p));
    CHECK(r.found_feasible);
    VerifyReport v = verify(compile(p).problem, r.labels);
    CHECK(v.cut_count == 1);
    CHECK(v.group_sizes == std::vector<int>{2, 2});
  }

  SUBCASE("state limit throws") {
    Graph g = random_graph(30, 60, 1);
    CHECK_THROWS_AS(brute_force(compile_graph_coloring(g, 6), 1000), std::runtime_error);
  }
}

TEST_CASE("brute force agrees with exhaustive rescoring through the verifier") {
  // Independent cross-check: enumerate every labeling ourselves, score with
  // verify(), and compare the optimum against brute_force's answer.
  std::mt19937_64 rng(7);
  Graph g = random_graph(6, 9, 77);

  for (auto kind : {ProblemKind::kGraphColoring, ProblemKind::kGraphPartition,
                    ProblemKind::kMaxCut, ProblemKind::kMis}) {
    ProblemInstance p = instance_of(kind, g.as_hypergraph(), kind == ProblemKind::kGraphColoring ? 3 : 2);
    p.beta = 4.0;
    CompiledLoss loss = compile(p);
    BruteForceResult got = brute_force(loss);

    const int n = 6, k = loss.k;
    bool best_feasible = false;
    double best_obj = 0.0;
    bool any = false;
    std::vector<int> labels(n, 0);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= k;
    for (long code = 0; code < total; ++code) {
      long rest = code;
      for (int i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(rest % k);
        rest /= k;
      }
      VerifyReport v = verify(loss.problem, labels);
      bool better = false;
      if (!any) {
        better = true;
      } else if (v.feasible != best_feasible) {
        better = v.feasible;
      } else {
        better = v.objective < best_obj - 1e-12;
      }
      if (better) {
        any = true;
        best_feasible = v.feasible;
        best_obj = v.objective;
      }
    }
    CAPTURE(to_string(kind));
    CHECK(got.found_feasible == best_feasible);
    if (best_feasible) CHECK(got.objective == doctest::Approx(best_obj).epsilon(1e-12));
  }
}

TEST_CASE("dsatur produces conflict-free colorings") {
  SUBCASE("petersen in three colors") {
    Graph petersen = load_graph(tu::data_path("petersen.edges"));
    DsaturResult r = dsatur_coloring(petersen);
    CHECK(r.colors_used == 3);
    ProblemInstance p = instance_of(ProblemKind::kGraphColoring, petersen.as_hypergraph(),
                                    r.colors_used);
    CHECK(verify(p, r.labels).feasible);
  }

  SUBCASE("random graphs stay conflict-free and within max degree + 1") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Graph g = random_graph(24, 60, seed);
      DsaturResult r = dsatur_coloring(g);
      CHECK(r.colors_used <= g.max_degree() + 1);
      ProblemInstance p = instance_of(ProblemKind::kGraphColoring, g.as_hypergraph(),
                                      r.colors_used);
      VerifyReport v = verify(p, r.labels);
      CHECK(v.feasible);
      CHECK(v.colors_used == r.colors_used);
    }
  }

  SUBCASE("empty and edgeless graphs") {
    Graph lonely(3, {});
    DsaturResult r = dsatur_coloring(lonely);
    CHECK(r.colors_used == 1);
    CHECK(r.labels == std::vector<int>{0, 0, 0});
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kgroup/generators.hpp"
#include "kgroup/pubo.hpp"
#include "test_util.hpp"

using namespace kgroup;
namespace tu = kgroup::testutil;

namespace {

OneHotQubo random_qubo(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  Tensor q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) q.at(i, j) = uni(rng);
  return OneHotQubo(n, q);
}

OneHotPubo random_pubo(int n, int m, int max_size, std::mt19937_64& rng) {
  Hypergraph h = random_hypergraph(n, m, 1, max_size, rng());
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  std::vector<double> coeffs(m);
  for (double& c : coeffs) c = uni(rng);
  return OneHotPubo(h, coeffs);
}

}  // namespace

TEST_CASE("assignment validation") {
  CHECK_NOTHROW(Assignment::hard({0, 2, 1}, 3));
  CHECK_THROWS_AS(Assignment::hard({0, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(Assignment::hard({-1, 0}, 3), std::invalid_argument);

  Tensor ok{{0.5, 0.5}, {1.0, 0.0}};
  CHECK_NOTHROW(Assignment::relaxed(ok));
  Tensor bad_sum{{0.7, 0.6}};
  CHECK_THROWS_AS(Assignment::relaxed(bad_sum), std::invalid_argument);
  Tensor negative{{1.2, -0.2}};
  CHECK_THROWS_AS(Assignment::relaxed(negative), std::invalid_argument);

  Assignment h = Assignment::hard({1, 0}, 2);
  CHECK(h.labels() == std::vector<int>{1, 0});
  CHECK(h.x.at(0, 1) == 1.0);
}

TEST_CASE("one-hot qubo rejects below-diagonal entries") {
  Tensor q{{1.0, 2.0}, {0.5, 1.0}};
  CHECK_THROWS_AS(OneHotQubo(2, q), std::invalid_argument);
  Tensor ok{{1.0, 2.0}, {0.0, 1.0}};
  CHECK_NOTHROW(OneHotQubo(2, ok));
  CHECK_THROWS_AS(OneHotQubo(3, ok), std::invalid_argument);  // size mismatch

  OneHotQubo folded = OneHotQubo::fold(Tensor{{1.0, 2.0}, {3.0, 4.0}});
  CHECK(folded.q == Tensor{{1.0, 5.0}, {0.0, 4.0}});
}

TEST_CASE("paper footnote examples: shared group scores, split groups do not") {
  Tensor q(2, 2);
  q.at(0, 1) = 1.0;
  OneHotQubo inst(2, q);
  CHECK(eval_qubo_naive(inst, Assignment::hard({0, 0}, 2)) == 1.0);
  CHECK(eval_qubo_naive(inst, Assignment::hard({0, 1}, 2)) == 0.0);
}

TEST_CASE("naive qubo equals the brute double sum on hard assignments") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 4, k = 3;
    OneHotQubo inst = random_qubo(n, rng);
    auto labels = tu::random_labels(n, k, rng);
    Assignment a = Assignment::hard(labels, k);
    double brute = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (labels[i] == labels[j]) brute += inst.q.at(i, j);
    CHECK(tu::rel_err(eval_qubo_naive(inst, a), brute) < 1e-12);
  }
}

TEST_CASE("vectorized qubo equals naive on hard and relaxed assignments") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(rng() % 20);
    int k = 2 + static_cast<int>(rng() % 5);
    OneHotQubo inst = random_qubo(n, rng);
    Assignment hard = Assignment::hard(tu::random_labels(n, k, rng), k);
    Assignment relaxed = Assignment::relaxed(tu::random_relaxed_rows(n, k, rng));
    CHECK(tu::rel_err(eval_qubo_vectorized(inst, hard), eval_qubo_naive(inst, hard)) < 1e-9);
    CHECK(tu::rel_err(eval_qubo_vectorized(inst, relaxed), eval_qubo_naive(inst, relaxed)) < 1e-9);
  }
}

TEST_CASE("zero matrix evaluates to zero") {
  OneHotQubo inst(3, Tensor(3, 3));
  std::mt19937_64 rng(13);
  CHECK(eval_qubo_naive(inst, Assignment::relaxed(tu::random_relaxed_rows(3, 4, rng))) == 0.0);
  CHECK(eval_qubo_vectorized(inst, Assignment::hard({0, 1, 2}, 4)) == 0.0);
}

TEST_CASE("split form is exact where the unsplit quadratic drifts") {
  // Q = diag(1, 0) and a half-half relaxed row: the linear reading of the
  // diagonal gives 0.5 + 0.5 = 1, the unsplit square gives 0.25 + 0.25 = 0.5.
  Tensor q{{1.0, 0.0}, {0.0, 0.0}};
  OneHotQubo inst(2, q);
  Tensor x{{0.5, 0.5}, {1.0, 0.0}};
  Assignment a = Assignment::relaxed(x);

  const double naive = eval_qubo_naive(inst, a);
  const double split = eval_qubo_vectorized(inst, a);
  const double unsplit = eval_qubo_unsplit(inst, x);

  CHECK(naive == 1.0);            // exact binary fractions throughout
  CHECK(split == naive);          // exact, not just within tolerance
  CHECK(unsplit == 0.5);
  // Drift = 0.25 * Q_ii contributed by each half-valued component of the row.
  CHECK(naive - unsplit == 2 * 0.25 * inst.q.at(0, 0));

  // On hard assignments the unsplit form is exact (x squared equals x).
  Assignment hard = Assignment::hard({0, 1}, 2);
  CHECK(eval_qubo_unsplit(inst, hard.x) == eval_qubo_naive(inst, hard));
}

TEST_CASE("paper toy pubo instance") {
  // Hyperedges {v1,v2}, {v1,v3,v4}, {v2,v3,v4} with unit coefficients; all
  // vertices in one group makes every term monochromatic.
  Hypergraph h(4, {{0, 1}, {0, 2, 3}, {1, 2, 3}});
  OneHotPubo inst(h, {1.0, 1.0, 1.0});
  CHECK(eval_pubo_naive(inst, Assignment::hard({0, 0, 0, 0}, 2)) == 3.0);
  CHECK(eval_pubo_vectorized(inst, Assignment::hard({0, 0, 0, 0}, 2)) == 3.0);

  // Split the triple terms: only e1 = {v1, v2} stays monochromatic.
  CHECK(eval_pubo_naive(inst, Assignment::hard({0, 0, 1, 0}, 2)) == 1.0);

  // Weighted: Q1*s(x1x2) + Q2*s(x1x3x4) + Q3*s(x2x3x4) on a relaxed X.
  OneHotPubo weighted(h, {2.0, -1.0, 0.5});
  std::mt19937_64 rng(21);
  Tensor x = tu::random_relaxed_rows(4, 3, rng);
  double want = 0.0;
  for (int c = 0; c < 3; ++c) {
    want += 2.0 * x.at(0, c) * x.at(1, c);
    want += -1.0 * x.at(0, c) * x.at(2, c) * x.at(3, c);
    want += 0.5 * x.at(1, c) * x.at(2, c) * x.at(3, c);
  }
  CHECK(tu::rel_err(eval_pubo_naive(weighted, Assignment::relaxed(x)), want) < 1e-12);
}

TEST_CASE("single-term monochromatic detection") {
  Hypergraph h(3, {{0, 1, 2}});
  OneHotPubo inst(h, {1.0});
  CHECK(eval_pubo_naive(inst, Assignment::hard({1, 1, 1}, 3)) == 1.0);
  CHECK(eval_pubo_naive(inst, Assignment::hard({1, 1, 2}, 3)) == 0.0);
}

TEST_CASE("vectorized pubo is bit-identical to naive") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(rng() % 18);
    int m = 1 + static_cast<int>(rng() % 40);
    int k = 2 + static_cast<int>(rng() % 5);
    OneHotPubo inst = random_pubo(n, m, std::min(n, 5), rng);
    Assignment hard = Assignment::hard(tu::random_labels(n, k, rng), k);
    Assignment relaxed = Assignment::relaxed(tu::random_relaxed_rows(n, k, rng));
    // Multiplying by exact 1.0 fill values preserves every product bit.
    CHECK(eval_pubo_vectorized(inst, hard) == eval_pubo_naive(inst, hard));
    CHECK(eval_pubo_vectorized(inst, relaxed) == eval_pubo_naive(inst, relaxed));
  }
}

TEST_CASE("pubo term and coefficient counts must agree") {
  Hypergraph h(3, {{0, 1}});
  CHECK_THROWS_AS(OneHotPubo(h, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("qubo to pubo conversion preserves values") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    int k = 2 + static_cast<int>(rng() % 3);
    OneHotQubo inst = random_qubo(n, rng);
    OneHotPubo as_pubo = pubo_from_qubo(inst);
    Assignment hard = Assignment::hard(tu::random_labels(n, k, rng), k);
    Assignment relaxed = Assignment::relaxed(tu::random_relaxed_rows(n, k, rng));
    CHECK(tu::rel_err(eval_pubo_naive(as_pubo, hard), eval_qubo_naive(inst, hard)) < 1e-12);
    // Relaxed: the PUBO singleton terms read the diagonal linearly, matching
    // the naive qubo semantics.
    CHECK(tu::rel_err(eval_pubo_naive(as_pubo, relaxed), eval_qubo_naive(inst, relaxed)) < 1e-9);
  }
}

TEST_CASE("qubo loss node reproduces the split evaluation") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng() % 10);
    int k = 2 + static_cast<int>(rng() % 4);
    OneHotQubo inst = random_qubo(n, rng);
    QuboLossContext ctx = make_qubo_loss_context(inst);
    Tensor x = tu::random_relaxed_rows(n, k, rng);

    Tape tape;
    ValueId xv = tape.parameter(&x);
    ValueId loss = qubo_loss_node(tape, ctx, xv);
    CHECK(tu::rel_err(tape.value(loss).at(0, 0),
                      eval_qubo_vectorized(inst, Assignment::relaxed(x))) < 1e-9);
  }
}

TEST_CASE("pubo loss node reproduces the dense evaluation and differentiates") {
  std::mt19937_64 rng(61);
  Hypergraph h(4, {{0, 1}, {0, 2, 3}, {1, 2, 3}});
  OneHotPubo inst(h, {2.0, -1.0, 0.5});
  PuboLossContext ctx = make_pubo_loss_context(inst);
  int k = 3;
  Tensor x = tu::random_relaxed_rows(4, k, rng);

  Tape tape;
  ValueId xv = tape.parameter(&x);
  ValueId loss = pubo_loss_node(tape, ctx, xv, k);
  CHECK(tu::rel_err(tape.value(loss).at(0, 0),
                    eval_pubo_naive(inst, Assignment::relaxed(x))) < 1e-12);

  CHECK(tu::max_grad_error({&x}, [&](Tape& t, const std::vector<ValueId>& p) {
          return pubo_loss_node(t, ctx, p[0], k);
        }) < 1e-6);
}

TEST_CASE("qubo loss node differentiates") {
  std::mt19937_64 rng(71);
  OneHotQubo inst = random_qubo(5, rng);
  QuboLossContext ctx = make_qubo_loss_context(inst);
  Tensor x = tu::random_relaxed_rows(5, 3, rng);
  CHECK(tu::max_grad_error({&x}, [&](Tape& t, const std::vector<ValueId>& p) {
          return qubo_loss_node(t, ctx, p[0]);
        }) < 1e-6);
}

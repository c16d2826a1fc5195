#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kgroup/pubo.hpp"
#include "kgroup/tape.hpp"
#include "kgroup/tensor.hpp"

namespace kgroup::testutil {

inline std::string data_path(const std::string& name) {
  return std::string(KGROUP_TEST_DATA) + "/" + name;
}

// Row-stochastic matrix with strictly positive entries.
inline Tensor random_relaxed_rows(int n, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  Tensor x(n, k);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
      x.at(i, c) = uni(rng);
      sum += x.at(i, c);
    }
    for (int c = 0; c < k; ++c) x.at(i, c) /= sum;
  }
  return x;
}

inline std::vector<int> random_labels(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<int> labels(n);
  for (int& lab : labels) lab = pick(rng);
  return labels;
}

inline Tensor one_hot(const std::vector<int>& labels, int k) {
  Tensor x(static_cast<int>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) x.at(static_cast<int>(i), labels[i]) = 1.0;
  return x;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

// Central finite differences of a scalar-valued function of the named
// parameter tensors against the tape gradients at the same point.
template <typename BuildLoss>
double max_grad_error(const std::vector<Tensor*>& params, BuildLoss build, double step = 1e-5) {
  Tape tape;
  std::vector<ValueId> ids;
  ids.reserve(params.size());
  for (Tensor* p : params) ids.push_back(tape.parameter(p));
  ValueId loss = build(tape, ids);
  tape.backward(loss);

  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const Tensor grad = tape.grad(ids[p]);
    for (int i = 0; i < params[p]->rows(); ++i) {
      for (int j = 0; j < params[p]->cols(); ++j) {
        const double save = params[p]->at(i, j);
        params[p]->at(i, j) = save + step;
        Tape tp;
        std::vector<ValueId> idp;
        for (Tensor* q : params) idp.push_back(tp.parameter(q));
        const double up = tp.value(build(tp, idp)).at(0, 0);
        params[p]->at(i, j) = save - step;
        Tape tm;
        std::vector<ValueId> idm;
        for (Tensor* q : params) idm.push_back(tm.parameter(q));
        const double down = tm.value(build(tm, idm)).at(0, 0);
        params[p]->at(i, j) = save;
        const double numeric = (up - down) / (2.0 * step);
        const double analytic = grad.at(i, j);
        const double err =
            std::abs(numeric - analytic) / std::max({1.0, std::abs(numeric), std::abs(analytic)});
        worst = std::max(worst, err);
      }
    }
  }
  return worst;
}

}  // namespace kgroup::testutil

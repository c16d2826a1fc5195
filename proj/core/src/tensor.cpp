#include "kgroup/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kgroup {

namespace {

void check_dims(int rows, int cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("tensor dimensions must be non-negative");
  }
}

}  // namespace

Tensor::Tensor(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Tensor::Tensor(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_dims(rows, cols);
  if (data_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("tensor data size does not match shape");
  }
}

Tensor::Tensor(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw std::invalid_argument("ragged initializer for tensor");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Tensor Tensor::full(int rows, int cols, double value) {
  Tensor t(rows, cols);
  t.fill(value);
  return t;
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Tensor::sum() const {
  double s = 0.0;
  for (double v : data_) s += v;
  return s;
}

void matmul_accumulate(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.cols() != b.rows() || out.rows() != a.rows() || out.cols() != b.cols()) {
    throw std::invalid_argument("matmul shape mismatch: (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ") * (" + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()) + ")");
  }
  const int m = a.rows(), k = a.cols(), n = b.cols();
  // i-k-j order keeps the inner loop contiguous in both b and out.
  for (int i = 0; i < m; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.row(p);
      for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
}

Tensor matmul_value(const Tensor& a, const Tensor& b) {
  Tensor out(a.rows(), b.cols());
  matmul_accumulate(a, b, out);
  return out;
}

Tensor row_softmax_value(const Tensor& x) {
  // Overflow upstream is a runtime condition (the trainer treats it as
  // divergence), unlike the shape errors which are invalid_argument.
  if (!x.all_finite()) {
    throw std::runtime_error("row_softmax: non-finite input");
  }
  Tensor out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    const double* in = x.row(i);
    double* o = out.row(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < x.cols(); ++c) mx = std::max(mx, in[c]);
    double denom = 0.0;
    for (int c = 0; c < x.cols(); ++c) {
      o[c] = std::exp(in[c] - mx);
      denom += o[c];
    }
    for (int c = 0; c < x.cols(); ++c) o[c] /= denom;
  }
  return out;
}

}  // namespace kgroup

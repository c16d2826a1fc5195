#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace kgroup {

// Dense 2-D double matrix, row-major. The only value type the numeric layer
// operates on; shapes are always explicit, zero-sized dimensions are legal.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols);  // zero-filled
  Tensor(int rows, int cols, std::vector<double> data);
  Tensor(std::initializer_list<std::initializer_list<double>> rows);

  static Tensor full(int rows, int cols, double value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

  void fill(double value);
  bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool all_finite() const;
  double sum() const;

  bool operator==(const Tensor&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// C = A * B. Shapes must agree; throws std::invalid_argument otherwise.
Tensor matmul_value(const Tensor& a, const Tensor& b);

// C = A * B accumulated into out (out += A * B); out must be pre-shaped.
void matmul_accumulate(const Tensor& a, const Tensor& b, Tensor& out);

// Numerically stable per-row softmax; each output row sums to 1 within
// 1e-12. Throws std::invalid_argument on non-finite input.
Tensor row_softmax_value(const Tensor& x);

}  // namespace kgroup

#include "kgroup/tape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kgroup {

namespace {

void check_broadcast(const Tensor& a, const Tensor& b) {
  bool rows_ok = a.rows() == b.rows() || a.rows() == 1 || b.rows() == 1;
  bool cols_ok = a.cols() == b.cols() || a.cols() == 1 || b.cols() == 1;
  if (!rows_ok || !cols_ok) {
    throw std::invalid_argument("broadcast shape mismatch: (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ") vs (" + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()) + ")");
  }
}

// Accumulates g (full output shape) into the gradient of an operand with
// shape (rows, cols), summing over axes the operand broadcast along.
void reduce_into(const Tensor& g, Tensor& acc) {
  const int gr = g.rows(), gc = g.cols();
  const int ar = acc.rows(), ac = acc.cols();
  for (int i = 0; i < gr; ++i) {
    const double* grow = g.row(i);
    double* arow = acc.row(ar == 1 ? 0 : i);
    if (ac == 1) {
      double s = 0.0;
      for (int j = 0; j < gc; ++j) s += grow[j];
      arow[0] += s;
    } else {
      for (int j = 0; j < gc; ++j) arow[j] += grow[j];
    }
  }
}

}  // namespace

int Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

ValueId Tape::parameter(const Tensor* storage) {
  Node n;
  n.op = Op::kParameter;
  n.value = *storage;
  n.needs_grad = true;
  return {push(std::move(n))};
}

ValueId Tape::constant(Tensor value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  return {push(std::move(n))};
}

ValueId Tape::constant_view(const Tensor* value) {
  Node n;
  n.op = Op::kConstant;
  n.external = value;
  return {push(std::move(n))};
}

ValueId Tape::matmul(ValueId a, ValueId b) {
  const Tensor& av = val(a.id);
  const Tensor& bv = val(b.id);
  Node n;
  n.op = Op::kMatmul;
  n.a = a.id;
  n.b = b.id;
  n.value = matmul_value(av, bv);
  n.needs_grad = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::binary_broadcast(Op op, ValueId a, ValueId b) {
  const Tensor& av = val(a.id);
  const Tensor& bv = val(b.id);
  check_broadcast(av, bv);
  const int rows = std::max(av.rows(), bv.rows());
  const int cols = std::max(av.cols(), bv.cols());
  Node n;
  n.op = op;
  n.a = a.id;
  n.b = b.id;
  n.value = Tensor(rows, cols);
  const int ar = av.rows(), acs = av.cols(), br = bv.rows(), bcs = bv.cols();
  for (int i = 0; i < rows; ++i) {
    const double* arow = av.row(ar == 1 ? 0 : i);
    const double* brow = bv.row(br == 1 ? 0 : i);
    double* o = n.value.row(i);
    for (int j = 0; j < cols; ++j) {
      const double x = arow[acs == 1 ? 0 : j];
      const double y = brow[bcs == 1 ? 0 : j];
      o[j] = op == Op::kAdd ? x + y : op == Op::kSub ? x - y : x * y;
    }
  }
  n.needs_grad = nodes_[a.id].needs_grad || nodes_[b.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::add(ValueId a, ValueId b) { return binary_broadcast(Op::kAdd, a, b); }
ValueId Tape::sub(ValueId a, ValueId b) { return binary_broadcast(Op::kSub, a, b); }
ValueId Tape::mul(ValueId a, ValueId b) { return binary_broadcast(Op::kMul, a, b); }

ValueId Tape::affine(ValueId x, double scale, double shift) {
  const Tensor& xv = val(x.id);
  Node n;
  n.op = Op::kAffine;
  n.a = x.id;
  n.scale = scale;
  n.shift = shift;
  n.value = Tensor(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) n.value.data()[i] = scale * xv.data()[i] + shift;
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::row_softmax(ValueId x) {
  Node n;
  n.op = Op::kRowSoftmax;
  n.a = x.id;
  n.value = row_softmax_value(val(x.id));
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::sigmoid(ValueId x) {
  const Tensor& xv = val(x.id);
  Node n;
  n.op = Op::kSigmoid;
  n.a = x.id;
  n.value = Tensor(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    const double v = xv.data()[i];
    // Stable in both tails.
    n.value.data()[i] = v >= 0 ? 1.0 / (1.0 + std::exp(-v))
                               : std::exp(v) / (1.0 + std::exp(v));
  }
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::relu(ValueId x) {
  const Tensor& xv = val(x.id);
  Node n;
  n.op = Op::kRelu;
  n.a = x.id;
  n.value = Tensor(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    n.value.data()[i] = xv.data()[i] > 0 ? xv.data()[i] : 0.0;
  }
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::col_product(ValueId x) {
  const Tensor& xv = val(x.id);
  Node n;
  n.op = Op::kColProduct;
  n.a = x.id;
  n.value = Tensor(1, xv.cols());
  for (int j = 0; j < xv.cols(); ++j) n.value.at(0, j) = 1.0;
  for (int i = 0; i < xv.rows(); ++i) {
    const double* row = xv.row(i);
    double* o = n.value.row(0);
    for (int j = 0; j < xv.cols(); ++j) o[j] *= row[j];
  }
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::col_sum(ValueId x) {
  const Tensor& xv = val(x.id);
  Node n;
  n.op = Op::kColSum;
  n.a = x.id;
  n.value = Tensor(1, xv.cols());
  for (int i = 0; i < xv.rows(); ++i) {
    const double* row = xv.row(i);
    double* o = n.value.row(0);
    for (int j = 0; j < xv.cols(); ++j) o[j] += row[j];
  }
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::row_max_pool(ValueId x) {
  const Tensor& xv = val(x.id);
  if (xv.rows() == 0) {
    throw std::invalid_argument("row_max_pool: empty input");
  }
  Node n;
  n.op = Op::kRowMaxPool;
  n.a = x.id;
  n.value = Tensor(1, xv.cols());
  for (int j = 0; j < xv.cols(); ++j) {
    double best = xv.at(0, j);
    for (int i = 1; i < xv.rows(); ++i) {
      if (xv.at(i, j) > best) best = xv.at(i, j);
    }
    n.value.at(0, j) = best;
  }
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::reduce_sum(ValueId x) {
  const Tensor& xv = val(x.id);
  Node n;
  n.op = Op::kReduceSum;
  n.a = x.id;
  n.value = Tensor(1, 1);
  n.value.at(0, 0) = xv.sum();
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

ValueId Tape::slice_cols(ValueId x, int begin, int end) {
  const Tensor& xv = val(x.id);
  if (begin < 0 || end > xv.cols() || begin > end) {
    throw std::invalid_argument("slice_cols: bad column range");
  }
  Node n;
  n.op = Op::kSliceCols;
  n.a = x.id;
  n.begin = begin;
  n.end = end;
  n.value = Tensor(xv.rows(), end - begin);
  for (int i = 0; i < xv.rows(); ++i) {
    const double* row = xv.row(i);
    double* o = n.value.row(i);
    for (int j = begin; j < end; ++j) o[j - begin] = row[j];
  }
  n.needs_grad = nodes_[x.id].needs_grad;
  return {push(std::move(n))};
}

const Tensor& Tape::value(ValueId v) const { return val(v.id); }

const Tensor& Tape::grad(ValueId v) const { return nodes_[v.id].grad; }

void Tape::backward(ValueId loss) {
  const Tensor& lv = val(loss.id);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw std::invalid_argument("backward: loss must be 1x1");
  }
  if (!std::isfinite(lv.at(0, 0))) {
    throw std::runtime_error("backward: non-finite loss");
  }

  for (Node& n : nodes_) {
    if (n.needs_grad) {
      const Tensor& v = n.external ? *n.external : n.value;
      n.grad = Tensor(v.rows(), v.cols());
    } else {
      n.grad = Tensor();
    }
  }
  if (!nodes_[loss.id].needs_grad) return;  // loss independent of parameters
  nodes_[loss.id].grad.at(0, 0) = 1.0;

  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad) continue;
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::kParameter:
      case Op::kConstant:
        break;
      case Op::kMatmul: {
        // dA = G * B^T, dB = A^T * G; written as explicit loops to avoid
        // materializing transposes.
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        const Tensor& av = val(n.a);
        const Tensor& bv = val(n.b);
        const int m = av.rows(), k = av.cols(), cols = bv.cols();
        if (na.needs_grad) {
          for (int i = 0; i < m; ++i) {
            const double* grow = g.row(i);
            double* da = na.grad.row(i);
            for (int p = 0; p < k; ++p) {
              const double* brow = bv.row(p);
              double s = 0.0;
              for (int j = 0; j < cols; ++j) s += grow[j] * brow[j];
              da[p] += s;
            }
          }
        }
        if (nb.needs_grad) {
          for (int i = 0; i < m; ++i) {
            const double* arow = av.row(i);
            const double* grow = g.row(i);
            for (int p = 0; p < k; ++p) {
              const double a = arow[p];
              if (a == 0.0) continue;
              double* db = nb.grad.row(p);
              for (int j = 0; j < cols; ++j) db[j] += a * grow[j];
            }
          }
        }
        break;
      }
      case Op::kAdd:
      case Op::kSub: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        if (na.needs_grad) reduce_into(g, na.grad);
        if (nb.needs_grad) {
          if (n.op == Op::kAdd) {
            reduce_into(g, nb.grad);
          } else {
            Tensor neg(g.rows(), g.cols());
            for (std::size_t i = 0; i < g.size(); ++i) neg.data()[i] = -g.data()[i];
            reduce_into(neg, nb.grad);
          }
        }
        break;
      }
      case Op::kMul: {
        Node& na = nodes_[n.a];
        Node& nb = nodes_[n.b];
        const Tensor& av = val(n.a);
        const Tensor& bv = val(n.b);
        const int rows = g.rows(), cols = g.cols();
        if (na.needs_grad) {
          Tensor t(rows, cols);
          for (int i = 0; i < rows; ++i) {
            const double* brow = bv.row(bv.rows() == 1 ? 0 : i);
            const double* grow = g.row(i);
            double* o = t.row(i);
            for (int j = 0; j < cols; ++j) {
              o[j] = grow[j] * brow[bv.cols() == 1 ? 0 : j];
            }
          }
          reduce_into(t, na.grad);
        }
        if (nb.needs_grad) {
          Tensor t(rows, cols);
          for (int i = 0; i < rows; ++i) {
            const double* arow = av.row(av.rows() == 1 ? 0 : i);
            const double* grow = g.row(i);
            double* o = t.row(i);
            for (int j = 0; j < cols; ++j) {
              o[j] = grow[j] * arow[av.cols() == 1 ? 0 : j];
            }
          }
          reduce_into(t, nb.grad);
        }
        break;
      }
      case Op::kAffine: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          for (std::size_t i = 0; i < g.size(); ++i) {
            na.grad.data()[i] += n.scale * g.data()[i];
          }
        }
        break;
      }
      case Op::kRowSoftmax: {
        // dz_ij = s_ij * (g_ij - sum_c g_ic * s_ic)
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const Tensor& s = n.value;
          for (int i = 0; i < s.rows(); ++i) {
            const double* srow = s.row(i);
            const double* grow = g.row(i);
            double dot = 0.0;
            for (int j = 0; j < s.cols(); ++j) dot += grow[j] * srow[j];
            double* o = na.grad.row(i);
            for (int j = 0; j < s.cols(); ++j) o[j] += srow[j] * (grow[j] - dot);
          }
        }
        break;
      }
      case Op::kSigmoid: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const Tensor& s = n.value;
          for (std::size_t i = 0; i < s.size(); ++i) {
            na.grad.data()[i] += g.data()[i] * s.data()[i] * (1.0 - s.data()[i]);
          }
        }
        break;
      }
      case Op::kRelu: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const Tensor& xv = val(n.a);
          for (std::size_t i = 0; i < xv.size(); ++i) {
            if (xv.data()[i] > 0) na.grad.data()[i] += g.data()[i];
          }
        }
        break;
      }
      case Op::kColProduct: {
        // Leave-one-out products via prefix/suffix scans per column.
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const Tensor& xv = val(n.a);
          const int rows = xv.rows(), cols = xv.cols();
          std::vector<double> suffix(static_cast<std::size_t>(rows) + 1);
          for (int j = 0; j < cols; ++j) {
            suffix[rows] = 1.0;
            for (int i = rows - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * xv.at(i, j);
            const double gj = g.at(0, j);
            double prefix = 1.0;
            for (int i = 0; i < rows; ++i) {
              na.grad.at(i, j) += gj * prefix * suffix[i + 1];
              prefix *= xv.at(i, j);
            }
          }
        }
        break;
      }
      case Op::kColSum: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const int rows = na.grad.rows(), cols = na.grad.cols();
          const double* grow = g.row(0);
          for (int i = 0; i < rows; ++i) {
            double* o = na.grad.row(i);
            for (int j = 0; j < cols; ++j) o[j] += grow[j];
          }
        }
        break;
      }
      case Op::kRowMaxPool: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const Tensor& xv = val(n.a);
          for (int j = 0; j < xv.cols(); ++j) {
            int arg = 0;
            double best = xv.at(0, j);
            for (int i = 1; i < xv.rows(); ++i) {
              if (xv.at(i, j) > best) {  // strict '>' keeps the lowest index on ties
                best = xv.at(i, j);
                arg = i;
              }
            }
            na.grad.at(arg, j) += g.at(0, j);
          }
        }
        break;
      }
      case Op::kReduceSum: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          const double gv = g.at(0, 0);
          for (std::size_t i = 0; i < na.grad.size(); ++i) na.grad.data()[i] += gv;
        }
        break;
      }
      case Op::kSliceCols: {
        Node& na = nodes_[n.a];
        if (na.needs_grad) {
          for (int i = 0; i < g.rows(); ++i) {
            const double* grow = g.row(i);
            double* o = na.grad.row(i);
            for (int j = n.begin; j < n.end; ++j) o[j] += grow[j - n.begin];
          }
        }
        break;
      }
    }
  }
}

}  // namespace kgroup

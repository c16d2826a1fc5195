#pragma once

#include <vector>

#include "kgroup/tensor.hpp"

namespace kgroup {

// Node handle on a Tape. Only meaningful together with the tape that issued it.
struct ValueId {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode automatic differentiation over Tensor values.
//
// Operations evaluate eagerly as the expression graph is built, so the graph
// is acyclic and topologically ordered by construction. backward() seeds the
// scalar loss with 1 and accumulates (+=) adjoints in reverse order, which
// handles values used by several consumers. Evaluation is single-threaded and
// deterministic: the same inputs produce bit-identical values and gradients.
//
// Broadcasting (add/sub/mul): dimensions must match or be 1 on one side; a
// size-1 dimension stretches, and its gradient sums over the stretched axis.
class Tape {
 public:
  // Leaf whose current value is copied from *storage. Gradients are exposed
  // through grad() after backward(). The pointer identifies the parameter but
  // the tape never writes through it.
  ValueId parameter(const Tensor* storage);

  // Leaf with no gradient, copied onto the tape.
  ValueId constant(Tensor value);

  // Leaf with no gradient, referencing caller-owned storage that must outlive
  // the tape. Avoids copying large fixed matrices into every epoch's graph.
  ValueId constant_view(const Tensor* value);

  ValueId matmul(ValueId a, ValueId b);
  ValueId add(ValueId a, ValueId b);  // broadcasting
  ValueId sub(ValueId a, ValueId b);  // broadcasting
  ValueId mul(ValueId a, ValueId b);  // broadcasting, elementwise
  ValueId affine(ValueId x, double scale, double shift);  // scale * x + shift
  ValueId scale(ValueId x, double s) { return affine(x, s, 0.0); }

  ValueId row_softmax(ValueId x);
  ValueId sigmoid(ValueId x);
  ValueId relu(ValueId x);  // subgradient 0 at the kink

  // Column-wise product over rows, 1 x cols. The gradient of each entry is
  // the leave-one-out product of its column, so zero entries never divide.
  ValueId col_product(ValueId x);

  // Column-wise sum over rows, 1 x cols.
  ValueId col_sum(ValueId x);

  // Column-wise max over rows, 1 x cols. Subgradient routes to exactly one
  // argmax per column; ties break to the lowest row index.
  ValueId row_max_pool(ValueId x);

  // Sum of all entries, 1 x 1.
  ValueId reduce_sum(ValueId x);

  // Columns [begin, end), gradient scatters back zero-padded.
  ValueId slice_cols(ValueId x, int begin, int end);

  const Tensor& value(ValueId v) const;

  // Reverse sweep from a 1 x 1 loss. Throws std::invalid_argument if the loss
  // is not scalar and std::runtime_error if it is non-finite.
  void backward(ValueId loss);

  // Adjoint of a node; zero-shaped until backward() has run.
  const Tensor& grad(ValueId v) const;

  int num_nodes() const { return static_cast<int>(nodes_.size()); }

 private:
  enum class Op {
    kParameter,
    kConstant,
    kMatmul,
    kAdd,
    kSub,
    kMul,
    kAffine,
    kRowSoftmax,
    kSigmoid,
    kRelu,
    kColProduct,
    kColSum,
    kRowMaxPool,
    kReduceSum,
    kSliceCols,
  };

  struct Node {
    Op op;
    int a = -1, b = -1;      // input node ids
    Tensor value;            // unused when external != nullptr
    const Tensor* external = nullptr;
    Tensor grad;
    bool needs_grad = false;
    double scale = 0.0, shift = 0.0;  // kAffine
    int begin = 0, end = 0;           // kSliceCols
  };

  const Tensor& val(int id) const {
    const Node& n = nodes_[id];
    return n.external ? *n.external : n.value;
  }
  int push(Node n);
  ValueId binary_broadcast(Op op, ValueId a, ValueId b);

  std::vector<Node> nodes_;
};

}  // namespace kgroup

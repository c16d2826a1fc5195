#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgroup/hypergraph.hpp"
#include "kgroup/tape.hpp"

namespace kgroup {

enum class EncoderBackend { kDirect, kMessagePassing };

struct EncoderConfig {
  EncoderBackend backend = EncoderBackend::kMessagePassing;
  int layers = 2;        // message-passing rounds
  int hidden_dim = 64;
  int feature_dim = 64;  // width of the fixed random input features
  int fc_layers = 1;     // readout depth; the last layer maps to k logits
  double init_scale = 1.0;

  void validate() const {
    if (layers < 1 || hidden_dim < 1 || feature_dim < 1 || fc_layers < 1) {
      throw std::invalid_argument("encoder dimensions must be at least 1");
    }
  }
};

EncoderBackend encoder_backend_from_string(const std::string& name);
std::string to_string(EncoderBackend backend);

// Produces the row-stochastic group matrix X (and optionally the color-usage
// vector y) from trainable parameters.
//
// kDirect:         X = row_softmax(L) over a trainable |V| x k logit table;
//                  y = sigmoid(u) over a trainable 1 x k row.
// kMessagePassing: h0 = fixed seeded random features; each round applies
//                  h <- relu(h W_self + mean_of_neighbors(h) W_neigh) with
//                  neighborhoods from the clique expansion of the structure;
//                  X = row_softmax(FC(h)); y = sigmoid(row_max_pool(h) W_y).
class Encoder {
 public:
  // `structure` supplies the neighborhoods (ignored by kDirect). All weights
  // and the input features are drawn deterministically from `seed`.
  Encoder(const EncoderConfig& config, const Hypergraph& structure, int k, bool color_head,
          std::uint64_t seed);

  // Testing seam: explicit input features (|V| x feature_dim) instead of the
  // seeded random ones. Only meaningful for kMessagePassing.
  void set_features(Tensor features);

  struct Output {
    ValueId x;  // |V| x k, rows sum to 1
    ValueId y;  // 1 x k in (0, 1); invalid when the encoder has no color head
    std::vector<ValueId> param_ids;  // tape leaf per entry of params(), same order
  };
  Output forward(Tape& tape) const;

  std::vector<Tensor>& params() { return params_; }
  const std::vector<Tensor>& params() const { return params_; }

  int num_vertices() const { return num_vertices_; }
  int k() const { return k_; }
  bool has_color_head() const { return color_head_; }

 private:
  EncoderConfig config_;
  int num_vertices_ = 0;
  int k_ = 0;
  bool color_head_ = false;
  std::vector<Tensor> params_;
  Tensor features_;       // |V| x feature_dim (message passing only)
  Tensor neighbor_mean_;  // |V| x |V| row-normalized adjacency (message passing only)
};

}  // namespace kgroup

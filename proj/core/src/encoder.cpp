#include "kgroup/encoder.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kgroup {

EncoderBackend encoder_backend_from_string(const std::string& name) {
  if (name == "direct") return EncoderBackend::kDirect;
  if (name == "message-passing") return EncoderBackend::kMessagePassing;
  throw std::invalid_argument("unknown encoder backend '" + name +
                              "' (direct, message-passing)");
}

std::string to_string(EncoderBackend backend) {
  return backend == EncoderBackend::kDirect ? "direct" : "message-passing";
}

namespace {

Tensor random_normal(int rows, int cols, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Tensor t(rows, cols);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = dist(rng);
  return t;
}

Tensor glorot(int rows, int cols, double scale, std::mt19937_64& rng) {
  return random_normal(rows, cols, scale * std::sqrt(2.0 / (rows + cols)), rng);
}

}  // namespace

Encoder::Encoder(const EncoderConfig& config, const Hypergraph& structure, int k, bool color_head,
                 std::uint64_t seed)
    : config_(config), num_vertices_(structure.num_vertices()), k_(k), color_head_(color_head) {
  config_.validate();
  if (k < 1) throw std::invalid_argument("encoder needs k >= 1");

  std::mt19937_64 rng(seed);

  if (config_.backend == EncoderBackend::kDirect) {
    params_.push_back(random_normal(num_vertices_, k_, config_.init_scale, rng));
    if (color_head_) {
      params_.push_back(random_normal(1, k_, config_.init_scale, rng));
    }
    return;
  }

  const int d0 = config_.feature_dim;
  const int d = config_.hidden_dim;
  features_ = random_normal(num_vertices_, d0, 1.0, rng);

  // Row-normalized adjacency of the clique expansion: row v averages the
  // embeddings of v's neighbors; isolated vertices average to zero.
  Graph expanded = clique_expansion(structure);
  neighbor_mean_ = Tensor(num_vertices_, num_vertices_);
  auto adj = expanded.adjacency_lists();
  for (int v = 0; v < num_vertices_; ++v) {
    if (adj[v].empty()) continue;
    const double w = 1.0 / adj[v].size();
    for (int u : adj[v]) neighbor_mean_.at(v, u) = w;
  }

  for (int l = 0; l < config_.layers; ++l) {
    const int din = l == 0 ? d0 : d;
    params_.push_back(glorot(din, d, config_.init_scale, rng));  // W_self
    params_.push_back(glorot(din, d, config_.init_scale, rng));  // W_neigh
  }
  for (int l = 0; l < config_.fc_layers; ++l) {
    const int din = d;
    const int dout = l == config_.fc_layers - 1 ? k_ : d;
    params_.push_back(glorot(din, dout, config_.init_scale, rng));
  }
  if (color_head_) {
    params_.push_back(glorot(d, k_, config_.init_scale, rng));  // W_y
  }
}

void Encoder::set_features(Tensor features) {
  if (config_.backend != EncoderBackend::kMessagePassing) {
    throw std::logic_error("explicit features only apply to the message-passing backend");
  }
  if (features.rows() != num_vertices_ || features.cols() != config_.feature_dim) {
    throw std::invalid_argument("feature matrix must be |V| x feature_dim");
  }
  features_ = std::move(features);
}

Encoder::Output Encoder::forward(Tape& tape) const {
  Output out;
  out.param_ids.reserve(params_.size());
  auto leaf = [&](const Tensor& t) {
    ValueId id = tape.parameter(&t);
    out.param_ids.push_back(id);
    return id;
  };

  if (config_.backend == EncoderBackend::kDirect) {
    out.x = tape.row_softmax(leaf(params_[0]));
    if (color_head_) {
      out.y = tape.sigmoid(leaf(params_[1]));
    }
    return out;
  }

  ValueId h = tape.constant_view(&features_);
  ValueId nm = tape.constant_view(&neighbor_mean_);
  std::size_t p = 0;
  for (int l = 0; l < config_.layers; ++l) {
    ValueId w_self = leaf(params_[p++]);
    ValueId w_neigh = leaf(params_[p++]);
    ValueId own = tape.matmul(h, w_self);
    ValueId agg = tape.matmul(tape.matmul(nm, h), w_neigh);
    h = tape.relu(tape.add(own, agg));
  }
  ValueId z = h;
  for (int l = 0; l < config_.fc_layers; ++l) {
    z = tape.matmul(z, leaf(params_[p++]));
    if (l + 1 < config_.fc_layers) z = tape.relu(z);
  }
  out.x = tape.row_softmax(z);
  if (color_head_) {
    out.y = tape.sigmoid(tape.matmul(tape.row_max_pool(h), leaf(params_[p++])));
  }
  return out;
}

}  // namespace kgroup

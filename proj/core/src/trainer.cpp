#include "kgroup/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

namespace kgroup {

double gini_penalty(const Tensor& x, double gamma) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sq += x.data()[i] * x.data()[i];
  return gamma * (x.rows() - sq);
}

double mean_row_gini(const Tensor& x) {
  if (x.rows() == 0) return 0.0;
  return gini_penalty(x, 1.0) / x.rows();
}

ValueId gini_penalty_node(Tape& tape, ValueId x, double gamma, int num_rows) {
  // gamma * (n - sum(X .* X))
  ValueId sq = tape.reduce_sum(tape.mul(x, x));
  return tape.affine(sq, -gamma, gamma * num_rows);
}

std::vector<int> harden(const Tensor& x) {
  std::vector<int> labels(x.rows());
  for (int i = 0; i < x.rows(); ++i) {
    const double* row = x.row(i);
    int arg = 0;
    for (int c = 1; c < x.cols(); ++c) {
      if (row[c] > row[arg]) arg = c;  // strict: ties keep the lowest column
    }
    labels[i] = arg;
  }
  return labels;
}

double confident_fraction(const Tensor& x, double threshold) {
  if (x.rows() == 0) return 1.0;
  int confident = 0;
  for (int i = 0; i < x.rows(); ++i) {
    const double* row = x.row(i);
    double mx = row[0];
    for (int c = 1; c < x.cols(); ++c) mx = std::max(mx, row[c]);
    confident += mx >= threshold;
  }
  return static_cast<double>(confident) / x.rows();
}

std::uint64_t restart_seed(std::uint64_t master, int restart) {
  // splitmix64 on the (master, restart) pair.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int resolve_threads(int requested, int tasks) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("KGROUP_THREADS")) {
      n = std::atoi(env);
    }
  }
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (n <= 0) n = 1;
  return std::min(n, std::max(tasks, 1));
}

namespace {

struct Adam {
  double lr, b1, b2, eps;
  int t = 0;
  std::vector<Tensor> m, v;

  explicit Adam(const OptimizerConfig& c, const std::vector<Tensor>& params)
      : lr(c.learning_rate), b1(c.beta1), b2(c.beta2), eps(c.epsilon) {
    m.reserve(params.size());
    v.reserve(params.size());
    for (const Tensor& p : params) {
      m.emplace_back(p.rows(), p.cols());
      v.emplace_back(p.rows(), p.cols());
    }
  }

  void step(std::vector<Tensor>& params, const std::vector<const Tensor*>& grads) {
    ++t;
    const double c1 = 1.0 - std::pow(b1, t);
    const double c2 = 1.0 - std::pow(b2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      double* p = params[i].data();
      double* mi = m[i].data();
      double* vi = v[i].data();
      const double* g = grads[i]->data();
      const std::size_t size = params[i].size();
      for (std::size_t j = 0; j < size; ++j) {
        mi[j] = b1 * mi[j] + (1.0 - b1) * g[j];
        vi[j] = b2 * vi[j] + (1.0 - b2) * g[j] * g[j];
        const double mhat = mi[j] / c1;
        const double vhat = vi[j] / c2;
        p[j] -= lr * mhat / (std::sqrt(vhat) + eps);
      }
    }
  }
};

// Feasibility first, then fewest violations, then objective; epoch and
// restart indices make ties deterministic.
bool better_eval(const HardEval& a, int a_restart, int a_epoch, const HardEval& b, int b_restart,
                 int b_epoch) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible && a.constraint_count != b.constraint_count) {
    return a.constraint_count < b.constraint_count;
  }
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a_restart != b_restart) return a_restart < b_restart;
  return a_epoch < b_epoch;
}

RestartOutcome run_restart(const CompiledLoss& loss, const LossGraphContext& ctx,
                           const TrainConfig& config, int restart) {
  RestartOutcome out;
  out.restart = restart;
  out.seed = restart_seed(config.seed, restart);

  Encoder encoder(config.encoder, loss.problem.structure, loss.k, loss.uses_color_head, out.seed);
  Adam adam(config.opt, encoder.params());
  out.trace.reserve(config.opt.epochs);

  const int epochs = config.opt.epochs;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Tape tape;
    // Any non-finite value (overflow in the forward pass or in the gradients)
    // marks the restart as diverged instead of aborting the run.
    try {
      Encoder::Output enc_out = encoder.forward(tape);

      LossWeights w;
      double lambda1 = 0.0, lambda2 = 0.0;
      if (loss.objective_kind == ObjectiveKind::kColoring) {
        lambda1 = config.conflict_ramp.at(epoch);
        lambda2 = config.usage_ramp.at(epoch);
        w.pubo_weight = lambda1;
        w.usage_weight = lambda2;
      }
      ValueId total = build_loss_node(tape, loss, ctx, enc_out.x, enc_out.y, w);

      const double gamma = config.anneal.at(epoch);
      if (gamma != 0.0) {
        ValueId gini = gini_penalty_node(tape, enc_out.x, gamma, encoder.num_vertices());
        total = tape.add(total, gini);
      }

      const Tensor& x_value = tape.value(enc_out.x);

      TraceRow row;
      row.epoch = epoch;
      row.loss = tape.value(total).at(0, 0);
      row.mean_gini = mean_row_gini(x_value);
      row.gamma = gamma;
      row.lambda1 = lambda1;
      row.lambda2 = lambda2;

      const bool snapshot = epoch % config.snapshot_interval == 0 || epoch == epochs - 1;
      if (snapshot) {
        std::vector<int> labels = harden(x_value);
        HardEval ev = evaluate_hard(loss, labels);
        row.has_metric = true;
        row.metric = static_cast<double>(ev.constraint_count);
        if (ev.feasible && out.first_feasible_epoch < 0) {
          out.first_feasible_epoch = epoch;
        }
        if (!out.has_best ||
            better_eval(ev, restart, epoch, out.best_eval, restart, out.best_epoch)) {
          out.has_best = true;
          out.best_eval = ev;
          out.best_labels = std::move(labels);
          out.best_epoch = epoch;
        }
      }
      out.trace.push_back(row);

      out.final_x = x_value;
      out.final_mean_gini = row.mean_gini;
      out.final_confident_fraction = confident_fraction(x_value);
      if (epoch == epochs - 1) {
        break;  // skip the last gradient step; the tape is only needed for stats
      }

      tape.backward(total);
      std::vector<const Tensor*> grads;
      grads.reserve(enc_out.param_ids.size());
      for (ValueId id : enc_out.param_ids) grads.push_back(&tape.grad(id));
      adam.step(encoder.params(), grads);
    } catch (const std::runtime_error&) {
      out.diverged = true;
      break;  // final_* stats keep the last finite state
    }
  }

  return out;
}

}  // namespace

TrainResult train(const CompiledLoss& loss, const TrainConfig& config) {
  config.opt.validate();
  config.anneal.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const LossGraphContext ctx = make_loss_graph_context(loss);
  const int restarts = config.opt.restarts;
  TrainResult result;
  result.restarts.resize(restarts);

  const int threads = resolve_threads(config.threads, restarts);
  if (threads <= 1) {
    for (int r = 0; r < restarts; ++r) {
      result.restarts[r] = run_restart(loss, ctx, config, r);
    }
  } else {
    for (int base = 0; base < restarts; base += threads) {
      const int batch = std::min(threads, restarts - base);
      std::vector<std::future<RestartOutcome>> futures;
      futures.reserve(batch);
      for (int i = 0; i < batch; ++i) {
        futures.push_back(std::async(std::launch::async, run_restart, std::cref(loss),
                                     std::cref(ctx), std::cref(config), base + i));
      }
      for (int i = 0; i < batch; ++i) {
        result.restarts[base + i] = futures[i].get();
      }
    }
  }

  for (const RestartOutcome& r : result.restarts) {
    result.diverged_restarts += r.diverged;
    if (r.first_feasible_epoch >= 0 &&
        (result.first_feasible_epoch < 0 || r.first_feasible_epoch < result.first_feasible_epoch)) {
      result.first_feasible_epoch = r.first_feasible_epoch;
    }
    if (!r.has_best) continue;
    if (!result.has_solution ||
        better_eval(r.best_eval, r.restart, r.best_epoch, result.eval, result.best_restart,
                    result.best_epoch)) {
      result.has_solution = true;
      result.eval = r.best_eval;
      result.labels = r.best_labels;
      result.best_restart = r.restart;
      result.best_epoch = r.best_epoch;
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace kgroup

#pragma once

#include <algorithm>
#include <stdexcept>

namespace kgroup {

// Linear annealing weight for the concentration penalty: starts negative
// (rewarding spread-out rows), crosses zero at epoch `zero_epoch`, then keeps
// climbing at the same slope until `cap`. Disabled means identically zero.
struct AnnealSchedule {
  bool enabled = true;
  double gamma0 = -2.5;
  int zero_epoch = 1000;
  double cap = 2.5;  // defaults to |gamma0|

  static AnnealSchedule off() { return {false, -2.5, 1000, 2.5}; }

  static AnnealSchedule linear(double gamma0, int zero_epoch) {
    AnnealSchedule s;
    s.gamma0 = gamma0;
    s.zero_epoch = zero_epoch;
    s.cap = -gamma0;
    s.validate();
    return s;
  }

  void validate() const {
    if (!enabled) return;
    if (gamma0 >= 0.0) {
      throw std::invalid_argument("annealing must start negative (exploration phase)");
    }
    if (zero_epoch < 1) {
      throw std::invalid_argument("annealing zero crossing must be at epoch >= 1");
    }
  }

  double at(int epoch) const {
    if (!enabled) return 0.0;
    const double g = gamma0 * (1.0 - static_cast<double>(epoch) / zero_epoch);
    return std::min(g, cap);
  }
};

// Linear ramp from 0 for constraint-penalty weights, clamped at `cap`.
struct PenaltyRamp {
  double cap = 10.0;
  double increment = 0.01;  // cap / zero_epoch by convention

  static PenaltyRamp over(double cap, int epochs_to_cap) {
    if (cap < 0.0 || epochs_to_cap < 1) {
      throw std::invalid_argument("penalty ramp needs cap >= 0 and at least one epoch");
    }
    return {cap, cap / epochs_to_cap};
  }

  static PenaltyRamp constant(double value) { return {value, value}; }

  double at(int epoch) const { return std::min(cap, increment * epoch); }
};

// Adaptive-moment gradient step configuration.
struct OptimizerConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 5000;
  int restarts = 10;

  void validate() const {
    if (learning_rate <= 0) throw std::invalid_argument("learning rate must be positive");
    if (epochs < 1) throw std::invalid_argument("need at least one epoch");
    if (restarts < 1) throw std::invalid_argument("need at least one restart");
    if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1) {
      throw std::invalid_argument("moment decays must lie in [0, 1)");
    }
  }
};

}  // namespace kgroup

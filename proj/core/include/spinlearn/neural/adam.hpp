#pragma once

#include <cstdint>

#include "spinlearn/neural/parameters.hpp"

namespace spinlearn::neural {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First and second moment estimates; `step` counts completed updates.
template <typename S>
struct AdamState {
  Vector<S> m;
  Vector<S> v;
  std::uint64_t step = 0;

  void reset(Eigen::Index n) {
    m = Vector<S>::Zero(n);
    v = Vector<S>::Zero(n);
    step = 0;
  }
};

/// One bias-corrected Adam update with step index t = state.step + 1:
///   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2,
///   p -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps).
/// Moments are (re)initialized to zero if their size does not match.
template <typename S>
void adam_step(Vector<S>& params, const Vector<S>& grad, AdamState<S>& state, const AdamConfig& cfg);

}  // namespace spinlearn::neural

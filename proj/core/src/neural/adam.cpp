#include "spinlearn/neural/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace spinlearn::neural {

template <typename S>
void adam_step(Vector<S>& params, const Vector<S>& grad, AdamState<S>& state, const AdamConfig& cfg) {
  if (grad.size() != params.size()) throw std::invalid_argument("gradient and parameter sizes differ");
  if (state.m.size() != params.size() || state.v.size() != params.size()) state.reset(params.size());
  const double t = static_cast<double>(++state.step);
  const S b1 = static_cast<S>(cfg.beta1), b2 = static_cast<S>(cfg.beta2);
  state.m = b1 * state.m + (S(1) - b1) * grad;
  state.v = b2 * state.v + (S(1) - b2) * grad.cwiseAbs2();
  const S c1 = static_cast<S>(1.0 / (1.0 - std::pow(cfg.beta1, t)));
  const S c2 = static_cast<S>(1.0 / (1.0 - std::pow(cfg.beta2, t)));
  const S lr = static_cast<S>(cfg.learning_rate), eps = static_cast<S>(cfg.epsilon);
  params.array() -= lr * (state.m.array() * c1) / ((state.v.array() * c2).sqrt() + eps);
}

template void adam_step<float>(Vector<float>&, const Vector<float>&, AdamState<float>&, const AdamConfig&);
template void adam_step<double>(Vector<double>&, const Vector<double>&, AdamState<double>&, const AdamConfig&);

}  // namespace spinlearn::neural

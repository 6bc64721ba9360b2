#include "spinlearn/neural/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "spinlearn/errors.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::neural {

AdamConfig TrainConfig::adam(std::size_t epoch) const {
  AdamConfig a;
  a.learning_rate = learning_rate * std::pow(lr_decay, static_cast<double>(epoch));
  a.beta1 = adam_beta1;
  a.beta2 = adam_beta2;
  a.epsilon = adam_epsilon;
  return a;
}

void TrainConfig::validate(std::size_t dataset_size) const {
  if (batch_size == 0) throw ConfigError("train.batch_size must be positive");
  if (batch_size > dataset_size) {
    throw ConfigError("train.batch_size " + std::to_string(batch_size) + " exceeds the training set size " +
                      std::to_string(dataset_size));
  }
  if (!(learning_rate > 0)) throw ConfigError("train.learning_rate must be positive");
  if (!(adam_beta1 >= 0 && adam_beta1 < 1)) throw ConfigError("train.adam_beta1 must lie in [0, 1)");
  if (!(adam_beta2 >= 0 && adam_beta2 < 1)) throw ConfigError("train.adam_beta2 must lie in [0, 1)");
  if (!(adam_epsilon > 0)) throw ConfigError("train.adam_epsilon must be positive");
  if (!(lr_decay > 0 && lr_decay <= 1)) throw ConfigError("train.lr_decay must lie in (0, 1]");
  if (!(grad_clip_norm >= 0)) throw ConfigError("train.grad_clip_norm must be non-negative");
}

void to_json(nlohmann::json& j, const TrainConfig& cfg) {
  j = nlohmann::json{{"batch_size", cfg.batch_size},     {"epochs", cfg.epochs},
                     {"learning_rate", cfg.learning_rate}, {"adam_beta1", cfg.adam_beta1},
                     {"adam_beta2", cfg.adam_beta2},       {"adam_epsilon", cfg.adam_epsilon},
                     {"seed", cfg.seed},                   {"lr_decay", cfg.lr_decay},
                     {"grad_clip_norm", cfg.grad_clip_norm}};
}

void from_json(const nlohmann::json& j, TrainConfig& cfg) {
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.adam_beta1 = j.value("adam_beta1", cfg.adam_beta1);
  cfg.adam_beta2 = j.value("adam_beta2", cfg.adam_beta2);
  cfg.adam_epsilon = j.value("adam_epsilon", cfg.adam_epsilon);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.lr_decay = j.value("lr_decay", cfg.lr_decay);
  cfg.grad_clip_norm = j.value("grad_clip_norm", cfg.grad_clip_norm);
}

double evaluate_loss(const Surrogate& model, const ExampleSet& set, std::size_t chunk) {
  if (set.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  chunk = std::max<std::size_t>(chunk, 1);
  std::vector<std::size_t> idx;
  double total = 0.0;
  for (std::size_t start = 0; start < set.size(); start += chunk) {
    const std::size_t end = std::min(set.size(), start + chunk);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    // Every example contributes the same number of entries, so chunk means combine by count.
    total += model.loss(model.make_batch(set, idx)) * static_cast<double>(idx.size());
  }
  return total / static_cast<double>(set.size());
}

TrainState train(Surrogate& model, const ExampleSet& train_set, const ExampleSet* validation, const TrainConfig& cfg,
                 TrainState state, const EpochCallback& on_epoch) {
  train_set.validate();
  if (validation) validation->validate();
  cfg.validate(train_set.size());
  auto& params = model.params();
  if (state.adam.m.size() != params.size()) state.adam.reset(params.size());

  const std::size_t n = train_set.size();
  std::vector<std::size_t> order(n);
  ParameterSet<float> grad(params.specs());
  for (std::size_t epoch = state.epoch; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = Rng::child(cfg.seed, 1, epoch);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    const AdamConfig adam = cfg.adam(epoch);
    double weighted = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const double loss = model.loss_and_gradient(model.make_batch(train_set, idx), grad);
      if (!std::isfinite(loss) || !grad.all_finite()) {
        throw DivergenceError("training diverged: non-finite loss in epoch " + std::to_string(epoch), epoch);
      }
      if (cfg.grad_clip_norm > 0) {
        const double norm = grad.values().cast<double>().norm();
        if (norm > cfg.grad_clip_norm) grad.values() *= static_cast<float>(cfg.grad_clip_norm / norm);
      }
      adam_step(params.values(), grad.values(), state.adam, adam);
      weighted += loss * static_cast<double>(idx.size());
    }
    if (!params.all_finite()) {
      throw DivergenceError("training diverged: non-finite parameters after epoch " + std::to_string(epoch), epoch);
    }
    const double train_loss = weighted / static_cast<double>(n);
    double val_loss = std::numeric_limits<double>::quiet_NaN();
    if (validation && validation->size() > 0) {
      val_loss = evaluate_loss(model, *validation, cfg.batch_size);
      if (!std::isfinite(val_loss)) {
        throw DivergenceError("validation loss is non-finite after epoch " + std::to_string(epoch), epoch);
      }
      state.history.validation.push_back(val_loss);
    }
    state.history.train.push_back(train_loss);
    state.epoch = epoch + 1;
    if (on_epoch) on_epoch(epoch, train_loss, val_loss);
  }
  return state;
}

TrainState train_full_evolution(Surrogate& model, const ExampleSet& train_set, const ExampleSet* validation,
                                const TrainConfig& cfg, TrainState state, const EpochCallback& on_epoch) {
  if (model.shape().arch.strategy != Strategy::kFullEvolution) {
    throw std::invalid_argument("train_full_evolution needs a full-evolution model");
  }
  return train(model, train_set, validation, cfg, std::move(state), on_epoch);
}

TrainState train_step_wise(Surrogate& model, const ExampleSet& train_set, const ExampleSet* validation,
                           const TrainConfig& cfg, TrainState state, const EpochCallback& on_epoch) {
  if (model.shape().arch.strategy != Strategy::kStepWise) {
    throw std::invalid_argument("train_step_wise needs a step-wise FCNN");
  }
  return train(model, train_set, validation, cfg, std::move(state), on_epoch);
}

}  // namespace spinlearn::neural

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spinlearn/neural/adam.hpp"
#include "spinlearn/neural/surrogate.hpp"

namespace spinlearn::neural {

struct TrainConfig {
  std::size_t batch_size = 1000;
  std::size_t epochs = 100;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  /// Learning rate multiplier applied after every epoch; 1 disables decay.
  double lr_decay = 1.0;
  /// Global gradient-norm clip; 0 disables clipping.
  double grad_clip_norm = 0.0;

  AdamConfig adam(std::size_t epoch) const;
  /// Throws ConfigError. `dataset_size` bounds the batch size.
  void validate(std::size_t dataset_size) const;
};

void to_json(nlohmann::json& j, const TrainConfig& cfg);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, TrainConfig& cfg);

struct LossHistory {
  std::vector<double> train;       // mean over the epoch's mini-batches
  std::vector<double> validation;  // after the epoch; empty without a validation set
};

/// Everything needed to continue training where it stopped.
struct TrainState {
  std::size_t epoch = 0;  // completed epochs
  AdamState<float> adam;
  LossHistory history;
};

/// Called after each epoch with (epoch index, train loss, validation loss or NaN).
using EpochCallback = std::function<void(std::size_t, double, double)>;

/// Mini-batch Adam on the mean squared error, continuing from `state` until
/// `cfg.epochs` epochs are complete. The shuffle order of epoch e is drawn from
/// Rng::child(cfg.seed, 1, e), so runs are reproducible and resumable.
/// Throws DivergenceError carrying the epoch on a non-finite loss or parameter.
TrainState train(Surrogate& model, const ExampleSet& train_set, const ExampleSet* validation, const TrainConfig& cfg,
                 TrainState state = {}, const EpochCallback& on_epoch = {});

/// Full-evolution training (LSTM or FCNN). std::invalid_argument for a step-wise model.
TrainState train_full_evolution(Surrogate& model, const ExampleSet& train_set, const ExampleSet* validation,
                                const TrainConfig& cfg, TrainState state = {}, const EpochCallback& on_epoch = {});
/// One-step FCNN training with teacher forcing. std::invalid_argument for other models.
TrainState train_step_wise(Surrogate& model, const ExampleSet& train_set, const ExampleSet* validation,
                           const TrainConfig& cfg, TrainState state = {}, const EpochCallback& on_epoch = {});

/// Mean squared error over a whole set, evaluated in chunks of `chunk` examples.
double evaluate_loss(const Surrogate& model, const ExampleSet& set, std::size_t chunk = 1000);

}  // namespace spinlearn::neural

#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "spinlearn/harness/config.hpp"
#include "spinlearn/neural/checkpoint.hpp"

namespace spinlearn::harness {

/// Cache root and run-wide settings shared by the subcommands.
///
/// Layout under `root`:
///   datasets/<hash>/   generated datasets, keyed by the dataset config
///   models/<hash>.ckpt checkpoints (+ .loss.csv), keyed by dataset fingerprint and job
///   suites/<hash>/     evaluation suites, keyed by model and eval config
struct Workspace {
  std::filesystem::path root = "work";
  unsigned workers = 1;
  bool force = false;
  std::function<void(const std::string&)> log;

  void note(const std::string& line) const {
    if (log) log(line);
  }
};

/// Generates the dataset unless an intact copy with the same configuration
/// already exists; returns its directory.
std::filesystem::path ensure_dataset(const Workspace& ws, const datasets::DatasetConfig& cfg);

struct TrainOutcome {
  neural::Checkpoint checkpoint;
  std::filesystem::path path;
  std::filesystem::path loss_csv;  // epoch,train_loss,validation_loss,validation_rmse
  std::size_t epochs_run = 0;      // epochs trained by this call
};

/// Trains the job described by `cmd`, writing the checkpoint after every epoch.
///
/// An existing checkpoint at `cmd.checkpoint` is resumed when it belongs to the
/// same job and dataset, returned as-is when already complete, and refused
/// with ConfigError when its dataset fingerprint differs. A checkpoint of a
/// different job is only replaced with `ws.force`.
TrainOutcome run_train(const Workspace& ws, const TrainCommand& cmd);

/// ensure_dataset + run_train with a checkpoint path derived from the content.
TrainOutcome ensure_model(const Workspace& ws, const Experiment& experiment);

/// Loads or trains the network named by `source`.
TrainOutcome resolve_model(const Workspace& ws, const ModelSource& source);

/// Dataset configuration recorded in a checkpoint written by run_train.
datasets::DatasetConfig checkpoint_dataset_config(const neural::Checkpoint& ckpt);

/// Writes `bytes` to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace spinlearn::harness

#include "spinlearn/harness/pipeline.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "spinlearn/datasets/generate.hpp"
#include "spinlearn/datasets/load.hpp"

namespace spinlearn::harness {

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path ensure_dataset(const Workspace& ws, const datasets::DatasetConfig& cfg) {
  cfg.validate();
  const auto dir = ws.root / "datasets" / content_hash(nlohmann::json(cfg)).substr(0, 16);
  if (std::filesystem::exists(dir / "manifest.json")) {
    try {
      const auto m = datasets::read_manifest(dir);
      if (nlohmann::json(m.config) == nlohmann::json(cfg)) {
        datasets::verify_dataset(dir);
        ws.note("dataset " + dir.string() + " (cached)");
        return dir;
      }
    } catch (const CorruptionError& e) {
      ws.note(std::string("regenerating damaged dataset: ") + e.what());
    }
  }
  ws.note(fmt::format("generating {} samples at M={} into {}", cfg.n_samples, cfg.model.sites, dir.string()));
  datasets::GenerateOptions opts;
  opts.workers = ws.workers;
  opts.force = true;
  opts.timestamp = datasets::default_timestamp();
  datasets::generate_dataset(cfg, dir, opts);
  return dir;
}

namespace {

// Identity of a training job. The epoch count is excluded so a finished run
// can be extended.
nlohmann::json job_json(const TrainCommand& cmd) {
  nlohmann::json train = cmd.train;
  train.erase("epochs");
  return {{"architecture", cmd.architecture},
          {"train", train},
          {"train_samples", cmd.train_samples},
          {"init_seed", cmd.init_seed}};
}

std::string loss_csv(const neural::LossHistory& h) {
  std::string out = "epoch,train_loss,validation_loss,validation_rmse\n";
  for (std::size_t e = 0; e < h.train.size(); ++e) {
    const double v = e < h.validation.size() ? h.validation[e] : std::nan("");
    out += fmt::format("{},{},{},{}\n", e, h.train[e], v, std::sqrt(v));
  }
  return out;
}

std::filesystem::path loss_path(const std::filesystem::path& ckpt) {
  auto p = ckpt;
  p.replace_extension(".loss.csv");
  return p;
}

}  // namespace

TrainOutcome run_train(const Workspace& ws, const TrainCommand& cmd) {
  try {
    cmd.architecture.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("train.architecture: ") + e.what());
  }
  if (cmd.checkpoint.empty()) throw ConfigError("train.checkpoint: output path required");
  const auto manifest = datasets::read_manifest(cmd.dataset_dir);
  const std::string fingerprint = manifest.fingerprint();
  const nlohmann::json job = job_json(cmd);

  auto train_samples = datasets::load_split(cmd.dataset_dir, manifest, datasets::Split::kTrain);
  if (cmd.train_samples > train_samples.size()) {
    throw ConfigError(fmt::format("train.train_samples: {} exceeds the training split ({})", cmd.train_samples,
                                  train_samples.size()));
  }
  if (cmd.train_samples) train_samples.resize(cmd.train_samples);
  const auto train_set = datasets::to_example_set(train_samples);
  train_samples.clear();
  const auto val_set = datasets::to_example_set(datasets::load_split(cmd.dataset_dir, manifest, datasets::Split::kValidation));
  cmd.train.validate(train_set.size());

  const neural::SurrogateShape shape{cmd.architecture, manifest.n_obs, manifest.n_frames,
                                     manifest.config.integrator.dt_sample};
  std::optional<neural::Surrogate> model;
  neural::CheckpointInfo info;
  if (std::filesystem::exists(cmd.checkpoint)) {
    auto ck = neural::load_checkpoint(cmd.checkpoint);
    if (ck.info.dataset_fingerprint != fingerprint) {
      throw ConfigError(fmt::format("{}: dataset fingerprint mismatch (checkpoint {}, dataset {})", cmd.checkpoint.string(),
                                    ck.info.dataset_fingerprint, fingerprint));
    }
    const bool same_job = ck.info.metadata.value("job", nlohmann::json()) == job && ck.model.shape() == shape;
    if (same_job && ck.info.state.epoch > cmd.train.epochs && !ws.force) {
      throw ConfigError(fmt::format("{}: already trained for {} epochs, more than the requested {} (use --force)",
                                    cmd.checkpoint.string(), ck.info.state.epoch, cmd.train.epochs));
    }
    if (same_job && ck.info.state.epoch <= cmd.train.epochs) {
      model.emplace(std::move(ck.model));
      info = std::move(ck.info);
      ws.note(fmt::format("resuming {} after {} epochs", cmd.checkpoint.string(), info.state.epoch));
    } else if (!ws.force) {
      throw ConfigError(cmd.checkpoint.string() + ": belongs to a different training job (use --force to replace)");
    }
  }
  if (!model) {
    model.emplace(shape, cmd.init_seed);
    info.seed = cmd.init_seed;
    info.train_config = cmd.train;
    info.dataset_fingerprint = fingerprint;
    info.metadata = {{"job", job}, {"dataset_config", manifest.config}, {"train_t_max", manifest.t_max()}};
  }

  info.train_config = cmd.train;
  std::size_t epochs_run = 0;
  while (info.state.epoch < cmd.train.epochs) {
    auto cfg = cmd.train;
    cfg.epochs = info.state.epoch + 1;
    info.state = neural::train(*model, train_set, &val_set, cfg, std::move(info.state));
    ++epochs_run;
    neural::save_checkpoint(cmd.checkpoint, *model, info);
    write_file_atomic(loss_path(cmd.checkpoint), loss_csv(info.state.history));
    const auto& h = info.state.history;
    ws.note(fmt::format("epoch {} train {:.6g} val {:.6g}", h.train.size() - 1, h.train.back(),
                        h.validation.empty() ? std::nan("") : h.validation.back()));
  }
  if (epochs_run == 0 && !std::filesystem::exists(cmd.checkpoint)) {
    neural::save_checkpoint(cmd.checkpoint, *model, info);
    write_file_atomic(loss_path(cmd.checkpoint), loss_csv(info.state.history));
  }
  return TrainOutcome{neural::Checkpoint{std::move(*model), std::move(info)}, cmd.checkpoint,
                      loss_path(cmd.checkpoint), epochs_run};
}

TrainOutcome ensure_model(const Workspace& ws, const Experiment& experiment) {
  experiment.validate();
  const auto dir = ensure_dataset(ws, experiment.dataset);
  TrainCommand cmd;
  cmd.dataset_dir = dir;
  cmd.architecture = experiment.architecture;
  cmd.train = experiment.train;
  cmd.train_samples = experiment.train_samples;
  cmd.init_seed = experiment.init_seed;
  const std::string fingerprint = datasets::read_manifest(dir).fingerprint();
  const std::string key =
      content_hash({{"dataset", fingerprint}, {"job", job_json(cmd)}, {"epochs", cmd.train.epochs}}).substr(0, 16);
  cmd.checkpoint = ws.root / "models" / (key + ".ckpt");
  std::filesystem::create_directories(cmd.checkpoint.parent_path());
  return run_train(ws, cmd);
}

TrainOutcome resolve_model(const Workspace& ws, const ModelSource& source) {
  source.validate();
  if (source.experiment) return ensure_model(ws, *source.experiment);
  return TrainOutcome{neural::load_checkpoint(*source.checkpoint), *source.checkpoint,
                      loss_path(*source.checkpoint), 0};
}

datasets::DatasetConfig checkpoint_dataset_config(const neural::Checkpoint& ckpt) {
  if (!ckpt.info.metadata.contains("dataset_config")) {
    throw ConfigError("checkpoint has no dataset_config metadata; it was not written by the train command");
  }
  return ckpt.info.metadata.at("dataset_config").get<datasets::DatasetConfig>();
}

}  // namespace spinlearn::harness

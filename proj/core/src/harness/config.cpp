#include "spinlearn/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "spinlearn/datasets/sha256.hpp"

namespace spinlearn::harness {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(path + "." + key + ": unknown key");
    }
  }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string_view to_string(DriveClass c) {
  switch (c) {
    case DriveClass::kGaussian: return "gp";
    case DriveClass::kPeriodic: return "periodic";
    case DriveClass::kQuench: return "quench";
  }
  return "?";
}

DriveClass drive_class_from_string(std::string_view name) {
  if (name == "gp") return DriveClass::kGaussian;
  if (name == "periodic") return DriveClass::kPeriodic;
  if (name == "quench") return DriveClass::kQuench;
  throw ConfigError("unknown drive class '" + std::string(name) + "' (expected gp, periodic or quench)");
}

std::string_view to_string(InitMode m) { return m == InitMode::kRandom ? "random" : "z"; }

InitMode init_mode_from_string(std::string_view name) {
  if (name == "random") return InitMode::kRandom;
  if (name == "z") return InitMode::kZ;
  throw ConfigError("unknown initial state '" + std::string(name) + "' (expected random or z)");
}

}  // namespace spinlearn::harness

// enum <-> JSON string
namespace spinlearn::harness {
void to_json(nlohmann::json& j, DriveClass c) { j = std::string(to_string(c)); }
void from_json(const nlohmann::json& j, DriveClass& c) { c = drive_class_from_string(j.get<std::string>()); }
void to_json(nlohmann::json& j, InitMode m) { j = std::string(to_string(m)); }
void from_json(const nlohmann::json& j, InitMode& m) { m = init_mode_from_string(j.get<std::string>()); }
}  // namespace spinlearn::harness

namespace spinlearn::harness {

std::size_t EvalConfig::drive_points() const {
  return static_cast<std::size_t>(std::ceil(t_max / gp.dt - 1e-9)) + 1;
}

qdyn::IntegratorConfig EvalConfig::reference_integrator() const {
  auto cfg = integrator;
  cfg.t_max = t_max;
  return cfg;
}

void EvalConfig::validate() const {
  if (per_class == 0) throw ConfigError("eval.per_class: must be positive");
  if (!(t_max > 0) || !std::isfinite(t_max)) throw ConfigError("eval.t_max: must be positive");
  if (classes.empty()) throw ConfigError("eval.classes: must not be empty");
  if (std::set<DriveClass>(classes.begin(), classes.end()).size() != classes.size()) {
    throw ConfigError("eval.classes: duplicate class");
  }
  try {
    auto g = gp;
    g.n = drive_points();
    g.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("eval.gp: ") + e.what());
  }
  try {
    drives.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("eval.drives: ") + e.what());
  }
  try {
    reference_integrator().validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("eval.integrator: ") + e.what());
  }
  const double ratio = integrator.dt_sample / gp.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1 - 1e-9) {
    throw ConfigError("eval.integrator.dt_sample: must be an integer multiple of eval.gp.dt");
  }
}

void to_json(nlohmann::json& j, const EvalConfig& cfg) {
  j = nlohmann::json{{"per_class", cfg.per_class},
                     {"t_max", cfg.t_max},
                     {"classes", cfg.classes},
                     {"gp_init", cfg.gp_init},
                     {"periodic_init", cfg.periodic_init},
                     {"quench_init", cfg.quench_init},
                     {"seed", cfg.seed},
                     {"gp", cfg.gp},
                     {"drives", cfg.drives},
                     {"integrator", cfg.integrator},
                     {"entropy", cfg.entropy},
                     {"closure", cfg.closure},
                     {"dump_predictions", cfg.dump_predictions}};
}

void from_json(const nlohmann::json& j, EvalConfig& cfg) {
  const std::string path = "eval";
  reject_unknown_keys(j,
                      {"per_class", "t_max", "classes", "gp_init", "periodic_init", "quench_init", "seed", "gp",
                       "drives", "integrator", "entropy", "closure", "dump_predictions"},
                      path);
  read_field(j, "per_class", cfg.per_class, path);
  read_field(j, "t_max", cfg.t_max, path);
  read_field(j, "classes", cfg.classes, path);
  read_field(j, "gp_init", cfg.gp_init, path);
  read_field(j, "periodic_init", cfg.periodic_init, path);
  read_field(j, "quench_init", cfg.quench_init, path);
  read_field(j, "seed", cfg.seed, path);
  read_field(j, "gp", cfg.gp, path);
  read_field(j, "drives", cfg.drives, path);
  read_field(j, "integrator", cfg.integrator, path);
  read_field(j, "entropy", cfg.entropy, path);
  read_field(j, "closure", cfg.closure, path);
  read_field(j, "dump_predictions", cfg.dump_predictions, path);
}

void Experiment::validate() const {
  dataset.validate();
  try {
    architecture.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("experiment.architecture: ") + e.what());
  }
  const std::size_t n_train = dataset.n_samples - static_cast<std::size_t>(std::llround(dataset.val_fraction * static_cast<double>(dataset.n_samples))) -
                              static_cast<std::size_t>(std::llround(dataset.test_fraction * static_cast<double>(dataset.n_samples)));
  if (train_samples > n_train) {
    throw ConfigError("experiment.train_samples: " + std::to_string(train_samples) + " exceeds the training split (" +
                      std::to_string(n_train) + ")");
  }
  train.validate(train_samples ? train_samples : n_train);
}

void to_json(nlohmann::json& j, const Experiment& e) {
  j = nlohmann::json{{"dataset", e.dataset},
                     {"architecture", e.architecture},
                     {"train", e.train},
                     {"train_samples", e.train_samples},
                     {"init_seed", e.init_seed}};
}

void from_json(const nlohmann::json& j, Experiment& e) {
  const std::string path = "experiment";
  reject_unknown_keys(j, {"dataset", "architecture", "train", "train_samples", "init_seed"}, path);
  read_field(j, "dataset", e.dataset, path);
  read_field(j, "architecture", e.architecture, path);
  if (j.contains("architecture") && !j["architecture"].contains("hidden")) {
    e.architecture.hidden = neural::ArchitectureSpec::defaults(e.architecture.arch, e.architecture.strategy).hidden;
  }
  read_field(j, "train", e.train, path);
  read_field(j, "train_samples", e.train_samples, path);
  read_field(j, "init_seed", e.init_seed, path);
}

void ModelSource::validate() const {
  if (checkpoint.has_value() == experiment.has_value()) {
    throw ConfigError("model: exactly one of 'checkpoint' and 'experiment' must be given");
  }
  if (experiment) experiment->validate();
}

void to_json(nlohmann::json& j, const ModelSource& m) {
  j = nlohmann::json::object();
  if (m.checkpoint) j["checkpoint"] = m.checkpoint->string();
  if (m.experiment) j["experiment"] = *m.experiment;
}

void from_json(const nlohmann::json& j, ModelSource& m) {
  reject_unknown_keys(j, {"checkpoint", "experiment"}, "model");
  if (j.contains("checkpoint")) {
    std::string p;
    read_field(j, "checkpoint", p, "model");
    m.checkpoint = p;
  }
  if (j.contains("experiment")) {
    Experiment e;
    read_field(j, "experiment", e, "model");
    m.experiment = e;
  }
}

namespace {

std::filesystem::path read_path(const nlohmann::json& j, const char* key, const std::string& path,
                                std::filesystem::path fallback = {}) {
  std::string s = fallback.string();
  read_field(j, key, s, path);
  return s;
}

}  // namespace

void from_json(const nlohmann::json& j, GenDataCommand& c) {
  reject_unknown_keys(j, {"dataset", "output"}, "gen-data");
  read_field(j, "dataset", c.dataset, "gen-data");
  c.output = read_path(j, "output", "gen-data", c.output);
}

void to_json(nlohmann::json& j, const TrainCommand& c) {
  j = nlohmann::json{{"dataset_dir", c.dataset_dir.string()}, {"architecture", c.architecture},
                     {"train", c.train},                      {"train_samples", c.train_samples},
                     {"init_seed", c.init_seed},              {"checkpoint", c.checkpoint.string()}};
}

void from_json(const nlohmann::json& j, TrainCommand& c) {
  const std::string path = "train";
  reject_unknown_keys(j, {"dataset_dir", "architecture", "train", "train_samples", "init_seed", "checkpoint"}, path);
  c.dataset_dir = read_path(j, "dataset_dir", path, c.dataset_dir);
  read_field(j, "architecture", c.architecture, path);
  if (j.contains("architecture") && !j["architecture"].contains("hidden")) {
    c.architecture.hidden = neural::ArchitectureSpec::defaults(c.architecture.arch, c.architecture.strategy).hidden;
  }
  read_field(j, "train", c.train, path);
  read_field(j, "train_samples", c.train_samples, path);
  read_field(j, "init_seed", c.init_seed, path);
  c.checkpoint = read_path(j, "checkpoint", path, c.checkpoint);
}

void from_json(const nlohmann::json& j, EvalCommand& c) {
  const std::string path = "eval-command";
  reject_unknown_keys(j, {"work_dir", "model", "eval", "output"}, path);
  c.work_dir = read_path(j, "work_dir", path, c.work_dir);
  read_field(j, "model", c.model, path);
  read_field(j, "eval", c.eval, path);
  c.output = read_path(j, "output", path, c.output);
}

void BenchConfig::validate() const {
  if (sites.empty()) throw ConfigError("bench.sites: must not be empty");
  for (int m : sites) {
    if (m < 2 || m > 20) throw ConfigError("bench.sites: " + std::to_string(m) + " outside [2, 20]");
  }
  if (instances == 0) throw ConfigError("bench.instances: must be positive");
  if (!(t_max > 0) || !(dt > 0)) throw ConfigError("bench.t_max/dt: must be positive");
  if (!(atol > 0) || !(rtol > 0)) throw ConfigError("bench.atol/rtol: must be positive");
  try {
    architecture.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bench.architecture: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const BenchConfig& c) {
  j = nlohmann::json{{"sites", c.sites}, {"instances", c.instances},       {"t_max", c.t_max},
                     {"dt", c.dt},       {"atol", c.atol},                 {"rtol", c.rtol},
                     {"seed", c.seed},   {"architecture", c.architecture}, {"output", c.output.string()}};
}

void from_json(const nlohmann::json& j, BenchConfig& c) {
  const std::string path = "bench";
  reject_unknown_keys(j, {"sites", "instances", "t_max", "dt", "atol", "rtol", "seed", "architecture", "output"}, path);
  read_field(j, "sites", c.sites, path);
  read_field(j, "instances", c.instances, path);
  read_field(j, "t_max", c.t_max, path);
  read_field(j, "dt", c.dt, path);
  read_field(j, "atol", c.atol, path);
  read_field(j, "rtol", c.rtol, path);
  read_field(j, "seed", c.seed, path);
  read_field(j, "architecture", c.architecture, path);
  c.output = read_path(j, "output", path, c.output);
}

void SweepCommand::validate() const {
  if (g_values.empty()) throw ConfigError("sweep-g.g_values: must not be empty");
  for (double g : g_values) {
    if (!std::isfinite(g)) throw ConfigError("sweep-g.g_values: must be finite");
  }
  experiment.validate();
  eval.validate();
}

void from_json(const nlohmann::json& j, SweepCommand& c) {
  const std::string path = "sweep-g";
  reject_unknown_keys(j, {"work_dir", "experiment", "g_values", "eval", "output"}, path);
  c.work_dir = read_path(j, "work_dir", path, c.work_dir);
  read_field(j, "experiment", c.experiment, path);
  read_field(j, "g_values", c.g_values, path);
  read_field(j, "eval", c.eval, path);
  c.output = read_path(j, "output", path, c.output);
}

void HeisenbergCommand::validate() const {
  if (experiment.dataset.model.kind != qdyn::ModelKind::kHeisenberg) {
    throw ConfigError("heisenberg.experiment.dataset.model.kind: must be heisenberg");
  }
  experiment.validate();
  eval.validate();
}

void from_json(const nlohmann::json& j, HeisenbergCommand& c) {
  const std::string path = "heisenberg";
  reject_unknown_keys(j, {"work_dir", "experiment", "eval", "output"}, path);
  c.work_dir = read_path(j, "work_dir", path, c.work_dir);
  read_field(j, "experiment", c.experiment, path);
  read_field(j, "eval", c.eval, path);
  c.output = read_path(j, "output", path, c.output);
}

std::string content_hash(const nlohmann::json& j) { return datasets::sha256_hex(j.dump()); }

}  // namespace spinlearn::harness

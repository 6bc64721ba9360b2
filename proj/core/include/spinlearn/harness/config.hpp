#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlearn/datasets/format.hpp"
#include "spinlearn/drives/eval_drives.hpp"
#include "spinlearn/drives/gaussian.hpp"
#include "spinlearn/errors.hpp"
#include "spinlearn/neural/surrogate.hpp"
#include "spinlearn/neural/train.hpp"
#include "spinlearn/qdyn/evolve.hpp"

namespace spinlearn::harness {

/// Reads `j[key]` into `out` when present. Any conversion failure becomes a
/// ConfigError prefixed with "<path>.<key>".
template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (j.at(key).is_number_integer() && j.at(key).get<std::int64_t>() < 0) {
      throw ConfigError(path + "." + key + ": must not be negative");
    }
  }
  try {
    out = j.at(key).get<T>();
  } catch (const ConfigError& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

/// Rejects keys outside `known` so typos do not silently fall back to defaults.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& path);

/// Parses a JSON file; ConfigError naming the file on I/O or syntax errors.
nlohmann::json load_json_file(const std::filesystem::path& path);

enum class DriveClass { kGaussian, kPeriodic, kQuench };
std::string_view to_string(DriveClass c);
DriveClass drive_class_from_string(std::string_view name);

/// Initial product state of an evaluation sample: p drawn uniformly ("random")
/// or all spins up along z ("z").
enum class InitMode { kRandom, kZ };
std::string_view to_string(InitMode m);
InitMode init_mode_from_string(std::string_view name);

/// Evaluation suites and what to compute on them.
struct EvalConfig {
  std::size_t per_class = 1000;
  double t_max = 14.0;
  std::vector<DriveClass> classes{DriveClass::kGaussian, DriveClass::kPeriodic, DriveClass::kQuench};
  InitMode gp_init = InitMode::kRandom;
  InitMode periodic_init = InitMode::kRandom;
  InitMode quench_init = InitMode::kRandom;
  std::uint64_t seed = 0;
  /// Grid, c0 and sigma ranges for held-out GP drives; n is derived from t_max.
  drives::GpConfig gp;
  drives::EvalDriveConfig drives;
  /// Exact reference integrator; t_max is taken from above.
  qdyn::IntegratorConfig integrator;
  bool entropy = false;
  bool closure = false;
  /// Writes every prediction and reference frame to CSV next to the report.
  bool dump_predictions = false;

  /// Drive grid points covering [0, t_max].
  std::size_t drive_points() const;
  qdyn::IntegratorConfig reference_integrator() const;
  void validate() const;
};
void to_json(nlohmann::json& j, const EvalConfig& cfg);
void from_json(const nlohmann::json& j, EvalConfig& cfg);

/// Dataset, network and optimizer of one trained model.
struct Experiment {
  datasets::DatasetConfig dataset;
  neural::ArchitectureSpec architecture;
  neural::TrainConfig train;
  std::size_t train_samples = 0;  // 0: the whole training split
  std::uint64_t init_seed = 0;

  void validate() const;
};
void to_json(nlohmann::json& j, const Experiment& e);
void from_json(const nlohmann::json& j, Experiment& e);

/// Where a network comes from: an existing checkpoint file or an experiment
/// trained (or reused) inside the work directory.
struct ModelSource {
  std::optional<std::filesystem::path> checkpoint;
  std::optional<Experiment> experiment;
  void validate() const;
};
void to_json(nlohmann::json& j, const ModelSource& m);
void from_json(const nlohmann::json& j, ModelSource& m);

struct GenDataCommand {
  datasets::DatasetConfig dataset;
  std::filesystem::path output;
};
void from_json(const nlohmann::json& j, GenDataCommand& c);

struct TrainCommand {
  std::filesystem::path dataset_dir;
  neural::ArchitectureSpec architecture;
  neural::TrainConfig train;
  std::size_t train_samples = 0;
  std::uint64_t init_seed = 0;
  std::filesystem::path checkpoint;
};
void to_json(nlohmann::json& j, const TrainCommand& c);
void from_json(const nlohmann::json& j, TrainCommand& c);

/// eval and baseline.
struct EvalCommand {
  std::filesystem::path work_dir = "work";
  ModelSource model;
  EvalConfig eval;
  std::filesystem::path output;
};
void from_json(const nlohmann::json& j, EvalCommand& c);

struct BenchConfig {
  std::vector<int> sites{6, 7, 8, 9, 10};
  std::size_t instances = 100;
  double t_max = 14.0;
  double dt = 0.125;
  double atol = 1e-5;
  double rtol = 1e-3;
  neural::ArchitectureSpec architecture;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  void validate() const;
};
void to_json(nlohmann::json& j, const BenchConfig& c);
void from_json(const nlohmann::json& j, BenchConfig& c);

/// One model per g on the longitudinal-field Ising ring.
struct SweepCommand {
  std::filesystem::path work_dir = "work";
  Experiment experiment;  // model.kind is replaced per g
  std::vector<double> g_values{0.0, 0.5, 1.0};
  EvalConfig eval;
  std::filesystem::path output;
  void validate() const;
};
void from_json(const nlohmann::json& j, SweepCommand& c);

/// Heisenberg ring with the drive on J_x.
struct HeisenbergCommand {
  std::filesystem::path work_dir = "work";
  Experiment experiment;
  EvalConfig eval;
  std::filesystem::path output;
  void validate() const;
};
void from_json(const nlohmann::json& j, HeisenbergCommand& c);

/// Hex sha256 of the canonical JSON dump; used as a cache key.
std::string content_hash(const nlohmann::json& j);

}  // namespace spinlearn::harness

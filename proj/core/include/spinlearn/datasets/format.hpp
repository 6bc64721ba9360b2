#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlearn/drives/drive.hpp"
#include "spinlearn/drives/gaussian.hpp"
#include "spinlearn/qdyn/evolve.hpp"
#include "spinlearn/qdyn/observables.hpp"
#include "spinlearn/qdyn/spin_model.hpp"
#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::datasets {

inline constexpr int kFormatVersion = 1;

/// Everything that determines the content of a dataset.
struct DatasetConfig {
  qdyn::SpinModel model = qdyn::SpinModel::tfi(7);
  drives::GpConfig gp;  // grid n, dt and the c0 / sigma ranges; its seed is unused
  qdyn::IntegratorConfig integrator;
  std::size_t n_samples = 10000;
  std::uint64_t root_seed = 0;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  drives::Interval p_range{0.0, 1.0};
  /// Replaces the GP draw by a constant drive when set.
  std::optional<double> constant_drive;
  int max_distance = -1;  // -1: floor(M/2)
  int max_retries = 8;

  int resolved_max_distance() const { return max_distance < 0 ? qdyn::default_max_distance(model.sites) : max_distance; }
  std::size_t n_frames() const { return integrator.sample_count(); }
  std::size_t n_obs() const { return qdyn::observable_count(resolved_max_distance()); }
  /// Drive points per sample interval.
  std::size_t frame_stride() const;

  /// Throws ConfigError with the offending field path.
  void validate() const;
};

void to_json(nlohmann::json& j, const DatasetConfig& cfg);
/// Missing keys keep their defaults; type errors become ConfigError naming the field.
void from_json(const nlohmann::json& j, DatasetConfig& cfg);

/// One generated trajectory. Sample `id` was drawn from Rng::child(root_seed, id, attempt);
/// the model, integrator settings and timestamp live in the manifest.
struct Sample {
  std::uint64_t id = 0;
  std::uint64_t attempt = 0;
  double c0 = 0.0;  // GP amplitude drawn for this sample (0 for constant drives)
  double sigma = 0.0;
  qdyn::ProductStateSpec init;
  drives::DriveTrajectory drive;
  qdyn::ObservableSeries series;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Split file layout: magic "SPLDATA1", u64 LE sample count, then per sample a
/// u64 LE header length, a JSON header and the float64 LE drive values
/// followed by the row-major series.
std::string serialize_samples(std::span<const Sample> samples);
/// Throws CorruptionError naming `source` on any structural problem.
std::vector<Sample> parse_samples(std::string_view bytes, const std::string& source);

enum class Split { kTrain, kValidation, kTest };
std::string_view to_string(Split split);
Split split_from_string(std::string_view name);

struct SplitInfo {
  std::string file;
  std::uint64_t first_id = 0;  // ids first_id .. first_id + count - 1
  std::size_t count = 0;
  std::uint64_t bytes = 0;
  std::string sha256;
};

struct RetryRecord {
  std::uint64_t id = 0;
  std::uint64_t failed_attempts = 0;
  std::string last_error;
};

struct Manifest {
  int format_version = kFormatVersion;
  DatasetConfig config;
  std::size_t n_frames = 0;
  std::size_t n_obs = 0;
  SplitInfo train, validation, test;
  std::vector<RetryRecord> retries;
  std::int64_t generated_at = 0;  // unix seconds

  const SplitInfo& split(Split s) const;
  SplitInfo& split(Split s);
  /// Training window length t_max.
  double t_max() const { return config.integrator.t_max; }
  /// Hash over the configuration and split hashes; independent of the timestamp.
  std::string fingerprint() const;
};

void to_json(nlohmann::json& j, const Manifest& m);
void from_json(const nlohmann::json& j, Manifest& m);

/// Contiguous id blocks: train, then validation, then test. Counts are
/// round(fraction * n) for validation and test.
void assign_splits(Manifest& m);

}  // namespace spinlearn::datasets

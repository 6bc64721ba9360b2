#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>

#include "spinlearn/datasets/format.hpp"

namespace spinlearn::datasets {

struct GenerateOptions {
  unsigned workers = 1;
  /// Overwrite an existing dataset in the target directory.
  bool force = false;
  /// Recorded in the manifest only; sample files never contain it.
  std::int64_t timestamp = 0;
  /// Called from worker threads with the number of finished samples.
  std::function<void(std::size_t done, std::size_t total)> progress;
  /// Test hook: return true to make (id, attempt) fail as if integration had failed.
  std::function<bool(std::uint64_t id, std::uint64_t attempt)> inject_failure;
};

/// Draws p, then (for GP drives) c0, sigma and the normals from
/// Rng::child(cfg.root_seed, id, attempt), and evolves the product state.
/// Throws IntegrationError if the integrator fails.
Sample generate_sample(const DatasetConfig& cfg, std::uint64_t id, std::uint64_t attempt = 0);

/// All samples in id order. A failed sample is retried with attempt + 1 up to
/// cfg.max_retries times; failures are listed in `retries`. Output is
/// independent of the worker count.
std::vector<Sample> generate_samples(const DatasetConfig& cfg, const GenerateOptions& options,
                                     std::vector<RetryRecord>* retries = nullptr);

/// Generates and writes manifest.json plus one .bin file per split into `dir`.
/// Throws ConfigError if `dir` already holds a manifest and options.force is false.
Manifest generate_dataset(const DatasetConfig& cfg, const std::filesystem::path& dir, const GenerateOptions& options);

/// SOURCE_DATE_EPOCH when set and numeric, else the current time.
std::int64_t default_timestamp();

}  // namespace spinlearn::datasets

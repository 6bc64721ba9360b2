#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include "spinlearn/datasets/format.hpp"
#include "spinlearn/neural/surrogate.hpp"

namespace spinlearn::datasets {

/// Throws CorruptionError for a missing or unreadable manifest.
Manifest read_manifest(const std::filesystem::path& dir);

/// Reads one split after checking its size and SHA-256 against the manifest.
/// Throws ConfigError("split too small ...") for an empty split and
/// CorruptionError naming the file on a hash or structure mismatch.
std::vector<Sample> load_split(const std::filesystem::path& dir, Split split);
std::vector<Sample> load_split(const std::filesystem::path& dir, const Manifest& manifest, Split split);

/// Hash check of every split file. Throws CorruptionError on the first mismatch.
void verify_dataset(const std::filesystem::path& dir);

/// Network view: drive values at the frame times and the flattened series.
neural::ExampleSet to_example_set(std::span<const Sample> samples);

/// One CSV row per (sample, frame): id, p, k, t, drive, then every observable.
void dump_csv(std::span<const Sample> samples, std::ostream& out);

}  // namespace spinlearn::datasets

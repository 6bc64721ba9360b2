#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "spinlearn/neural/surrogate.hpp"
#include "spinlearn/neural/train.hpp"

namespace spinlearn::neural {

/// Everything stored next to the parameters.
struct CheckpointInfo {
  std::uint64_t seed = 0;  // parameter-initialization seed
  TrainConfig train_config;
  std::string dataset_fingerprint;
  TrainState state;  // epochs done, Adam moments, loss history
  nlohmann::json metadata = nlohmann::json::object();
};

struct Checkpoint {
  Surrogate model;
  CheckpointInfo info;
};

/// File layout: 8-byte magic "SPLCKPT1", u64 little-endian header length, UTF-8
/// JSON header, then little-endian float64 values: parameters in declaration
/// order, followed by the Adam m and v vectors when the header says
/// "adam_moments": true. Written to a temporary file and renamed into place.
void save_checkpoint(const std::filesystem::path& path, const Surrogate& model, const CheckpointInfo& info);

/// Throws CorruptionError on a bad magic, truncated payload, trailing bytes or
/// a tensor table that disagrees with the recorded shape.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace spinlearn::neural

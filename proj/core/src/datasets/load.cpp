#include "spinlearn/datasets/load.hpp"

#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spinlearn/datasets/sha256.hpp"
#include "spinlearn/errors.hpp"

namespace spinlearn::datasets {

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw CorruptionError(path.string() + ": missing manifest");
  try {
    auto m = nlohmann::json::parse(in).get<Manifest>();
    if (m.format_version != kFormatVersion) {
      throw CorruptionError(path.string() + ": unsupported format version " + std::to_string(m.format_version));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CorruptionError(path.string() + ": " + e.what());
  }
}

namespace {

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptionError(path.string() + ": missing split file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string verified_bytes(const std::filesystem::path& dir, const SplitInfo& info) {
  const auto path = dir / info.file;
  std::string bytes = read_bytes(path);
  if (bytes.size() != info.bytes) {
    throw CorruptionError(path.string() + ": size " + std::to_string(bytes.size()) + " differs from manifest " +
                          std::to_string(info.bytes));
  }
  if (sha256_hex(bytes) != info.sha256) throw CorruptionError(path.string() + ": sha256 mismatch");
  return bytes;
}

}  // namespace

std::vector<Sample> load_split(const std::filesystem::path& dir, Split split) {
  return load_split(dir, read_manifest(dir), split);
}

std::vector<Sample> load_split(const std::filesystem::path& dir, const Manifest& manifest, Split split) {
  const SplitInfo& info = manifest.split(split);
  if (info.count == 0) {
    throw ConfigError("split too small: '" + std::string(to_string(split)) + "' has no samples out of " +
                      std::to_string(manifest.config.n_samples));
  }
  const auto path = dir / info.file;
  auto samples = parse_samples(verified_bytes(dir, info), path.string());
  if (samples.size() != info.count) throw CorruptionError(path.string() + ": sample count differs from manifest");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].id != info.first_id + i) throw CorruptionError(path.string() + ": unexpected sample id");
    if (samples[i].series.size() != manifest.n_frames) throw CorruptionError(path.string() + ": frame count mismatch");
  }
  return samples;
}

void verify_dataset(const std::filesystem::path& dir) {
  const Manifest m = read_manifest(dir);
  for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) verified_bytes(dir, m.split(s));
}

neural::ExampleSet to_example_set(std::span<const Sample> samples) {
  neural::ExampleSet set;
  if (samples.empty()) return set;
  const auto& first = samples.front().series;
  set.n_frames = first.size();
  set.n_obs = qdyn::observable_count(first.max_distance());
  set.dt = first.dt;
  set.examples.reserve(samples.size());
  for (const auto& s : samples) {
    neural::Example e;
    e.drive = neural::resample_drive(s.drive, s.series.dt, s.series.size());
    e.series = s.series.flatten();
    set.examples.push_back(std::move(e));
  }
  set.validate();
  return set;
}

void dump_csv(std::span<const Sample> samples, std::ostream& out) {
  if (samples.empty()) return;
  out << "id,p,k,t,drive";
  for (const auto& name : qdyn::observable_names(samples.front().series.max_distance())) out << ',' << name;
  out << '\n';
  for (const auto& s : samples) {
    const auto drive = neural::resample_drive(s.drive, s.series.dt, s.series.size());
    for (std::size_t k = 0; k < s.series.size(); ++k) {
      out << fmt::format("{},{},{},{},{}", s.id, s.init.p, k, s.series.time(k), drive[k]);
      for (double v : s.series.frames[k].flatten()) out << fmt::format(",{}", v);
      out << '\n';
    }
  }
}

}  // namespace spinlearn::datasets

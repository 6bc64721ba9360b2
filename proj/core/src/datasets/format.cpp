#include "spinlearn/datasets/format.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <type_traits>

#include "spinlearn/datasets/sha256.hpp"
#include "spinlearn/errors.hpp"

namespace spinlearn::datasets {
namespace {

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
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_double(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

constexpr char kMagic[8] = {'S', 'P', 'L', 'D', 'A', 'T', 'A', '1'};

class Reader {
 public:
  Reader(std::string_view bytes, const std::string& source) : bytes_(bytes), source_(source) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view take(std::uint64_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }
  CorruptionError error(const std::string& why) const {
    return CorruptionError(source_ + ": " + why + " at byte " + std::to_string(pos_));
  }

 private:
  void need(std::uint64_t n) const {
    if (n > bytes_.size() - pos_) throw error("truncated record");
  }
  std::string_view bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t DatasetConfig::frame_stride() const {
  const double ratio = integrator.dt_sample / gp.dt;
  return static_cast<std::size_t>(std::llround(ratio));
}

void DatasetConfig::validate() const {
  try {
    model.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("dataset.model: ") + e.what());
  }
  if (model.sites < 2) throw ConfigError("dataset.model.M: must be at least 2");
  if (model.sites > 20) throw ConfigError("dataset.model.M: datasets are limited to 20 sites");
  try {
    gp.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("dataset.gp: ") + e.what());
  }
  try {
    integrator.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("dataset.integrator: ") + e.what());
  }
  if (n_samples == 0) throw ConfigError("dataset.n_samples: must be positive");
  if (!(val_fraction >= 0 && test_fraction >= 0 && val_fraction + test_fraction < 1)) {
    throw ConfigError("dataset.val_fraction/test_fraction: must be non-negative with sum below 1");
  }
  if (!(p_range.lo >= 0 && p_range.hi <= 1 && p_range.lo <= p_range.hi)) {
    throw ConfigError("dataset.p_range: must satisfy 0 <= lo <= hi <= 1");
  }
  const double ratio = integrator.dt_sample / gp.dt;
  if (ratio < 1 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw ConfigError("dataset.integrator.dt_sample: must be an integer multiple of gp.dt");
  }
  if (gp.dt * static_cast<double>(gp.n - 1) < integrator.t_max * (1 - 1e-12)) {
    throw ConfigError("dataset.gp.n: drive grid does not cover integrator.t_max");
  }
  const int lmax = qdyn::default_max_distance(model.sites);
  if (max_distance < -1 || max_distance > lmax) {
    throw ConfigError("dataset.max_distance: must be -1 or in [0, " + std::to_string(lmax) + "]");
  }
  if (constant_drive && !std::isfinite(*constant_drive)) throw ConfigError("dataset.constant_drive: must be finite");
  if (max_retries < 0) throw ConfigError("max_retries: must be non-negative");
}

void to_json(nlohmann::json& j, const DatasetConfig& cfg) {
  j = nlohmann::json{{"model", cfg.model},
                     {"gp", cfg.gp},
                     {"integrator", cfg.integrator},
                     {"n_samples", cfg.n_samples},
                     {"root_seed", cfg.root_seed},
                     {"val_fraction", cfg.val_fraction},
                     {"test_fraction", cfg.test_fraction},
                     {"p_range", cfg.p_range},
                     {"max_distance", cfg.max_distance},
                     {"max_retries", cfg.max_retries}};
  j["constant_drive"] = cfg.constant_drive ? nlohmann::json(*cfg.constant_drive) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, DatasetConfig& cfg) {
  const std::string path = "dataset";
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  read_field(j, "model", cfg.model, path);
  read_field(j, "gp", cfg.gp, path);
  read_field(j, "integrator", cfg.integrator, path);
  read_field(j, "n_samples", cfg.n_samples, path);
  read_field(j, "root_seed", cfg.root_seed, path);
  read_field(j, "val_fraction", cfg.val_fraction, path);
  read_field(j, "test_fraction", cfg.test_fraction, path);
  read_field(j, "p_range", cfg.p_range, path);
  read_field(j, "max_distance", cfg.max_distance, path);
  read_field(j, "max_retries", cfg.max_retries, path);
  if (j.contains("constant_drive")) {
    if (j["constant_drive"].is_null()) {
      cfg.constant_drive.reset();
    } else {
      double v = 0;
      read_field(j, "constant_drive", v, path);
      cfg.constant_drive = v;
    }
  }
}

std::string serialize_samples(std::span<const Sample> samples) {
  std::string out(kMagic, kMagic + 8);
  put_u64(out, samples.size());
  for (const auto& s : samples) {
    const std::vector<double> flat = s.series.flatten();
    const std::size_t n_obs = s.series.size() ? flat.size() / s.series.size() : 0;
    const nlohmann::json header{{"id", s.id},
                                {"attempt", s.attempt},
                                {"c0", s.c0},
                                {"sigma", s.sigma},
                                {"p", s.init.p},
                                {"drive_n", s.drive.size()},
                                {"drive_dt", s.drive.dt},
                                {"drive_t0", s.drive.t0},
                                {"n_frames", s.series.size()},
                                {"n_obs", n_obs},
                                {"dt", s.series.dt}};
    const std::string text = header.dump();
    put_u64(out, text.size());
    out += text;
    for (double v : s.drive.values) put_double(out, v);
    for (double v : flat) put_double(out, v);
  }
  return out;
}

std::vector<Sample> parse_samples(std::string_view bytes, const std::string& source) {
  Reader r(bytes, source);
  if (r.take(8) != std::string_view(kMagic, 8)) throw r.error("bad magic");
  const std::uint64_t count = r.u64();
  std::vector<Sample> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t len = r.u64();
    nlohmann::json h;
    try {
      h = nlohmann::json::parse(r.take(len));
    } catch (const nlohmann::json::exception& e) {
      throw r.error(std::string("unreadable sample header: ") + e.what());
    }
    Sample s;
    std::size_t drive_n = 0, n_frames = 0, n_obs = 0;
    try {
      s.id = h.at("id").get<std::uint64_t>();
      s.attempt = h.at("attempt").get<std::uint64_t>();
      s.c0 = h.at("c0").get<double>();
      s.sigma = h.at("sigma").get<double>();
      s.init.p = h.at("p").get<double>();
      drive_n = h.at("drive_n").get<std::size_t>();
      s.drive.dt = h.at("drive_dt").get<double>();
      s.drive.t0 = h.at("drive_t0").get<double>();
      n_frames = h.at("n_frames").get<std::size_t>();
      n_obs = h.at("n_obs").get<std::size_t>();
      s.series.dt = h.at("dt").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw r.error(std::string("malformed sample header: ") + e.what());
    }
    if (n_obs < 3 || (n_obs - 3) % 9 != 0) throw r.error("invalid observable count");
    s.drive.values.resize(drive_n);
    for (auto& v : s.drive.values) v = r.f64();
    std::vector<double> flat(n_frames * n_obs);
    for (auto& v : flat) v = r.f64();
    s.series = qdyn::ObservableSeries::from_flat(flat, n_frames, s.series.dt);
    out.push_back(std::move(s));
  }
  if (!r.done()) throw r.error("trailing bytes");
  return out;
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val" || name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + std::string(name) + "' (expected train, val or test)");
}

const SplitInfo& Manifest::split(Split s) const {
  return s == Split::kTrain ? train : s == Split::kValidation ? validation : test;
}

SplitInfo& Manifest::split(Split s) { return s == Split::kTrain ? train : s == Split::kValidation ? validation : test; }

namespace {

nlohmann::json split_json(const SplitInfo& s) {
  return {{"file", s.file}, {"first_id", s.first_id}, {"count", s.count}, {"bytes", s.bytes}, {"sha256", s.sha256}};
}

SplitInfo split_from(const nlohmann::json& j) {
  SplitInfo s;
  s.file = j.at("file").get<std::string>();
  s.first_id = j.at("first_id").get<std::uint64_t>();
  s.count = j.at("count").get<std::size_t>();
  s.bytes = j.at("bytes").get<std::uint64_t>();
  s.sha256 = j.at("sha256").get<std::string>();
  return s;
}

}  // namespace

std::string Manifest::fingerprint() const {
  const nlohmann::json content{{"format_version", format_version},
                               {"config", config},
                               {"train", train.sha256},
                               {"val", validation.sha256},
                               {"test", test.sha256}};
  return sha256_hex(content.dump());
}

void to_json(nlohmann::json& j, const Manifest& m) {
  auto retries = nlohmann::json::array();
  for (const auto& r : m.retries) {
    retries.push_back({{"id", r.id}, {"failed_attempts", r.failed_attempts}, {"last_error", r.last_error}});
  }
  j = nlohmann::json{{"format_version", m.format_version},
                     {"config", m.config},
                     {"n_frames", m.n_frames},
                     {"n_obs", m.n_obs},
                     {"t_max", m.t_max()},
                     {"splits", {{"train", split_json(m.train)}, {"val", split_json(m.validation)}, {"test", split_json(m.test)}}},
                     {"retries", retries},
                     {"generated_at", m.generated_at},
                     {"fingerprint", m.fingerprint()}};
}

void from_json(const nlohmann::json& j, Manifest& m) {
  m.format_version = j.at("format_version").get<int>();
  m.config = j.at("config").get<DatasetConfig>();
  m.n_frames = j.at("n_frames").get<std::size_t>();
  m.n_obs = j.at("n_obs").get<std::size_t>();
  const auto& s = j.at("splits");
  m.train = split_from(s.at("train"));
  m.validation = split_from(s.at("val"));
  m.test = split_from(s.at("test"));
  m.retries.clear();
  for (const auto& r : j.at("retries")) {
    m.retries.push_back({r.at("id").get<std::uint64_t>(), r.at("failed_attempts").get<std::uint64_t>(),
                         r.at("last_error").get<std::string>()});
  }
  m.generated_at = j.at("generated_at").get<std::int64_t>();
}

void assign_splits(Manifest& m) {
  const auto n = m.config.n_samples;
  const auto n_val = static_cast<std::size_t>(std::llround(m.config.val_fraction * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::llround(m.config.test_fraction * static_cast<double>(n)));
  if (n_val + n_test > n) throw ConfigError("val_fraction/test_fraction: splits exceed the sample count");
  m.train = {"train.bin", 0, n - n_val - n_test, 0, ""};
  m.validation = {"val.bin", n - n_val - n_test, n_val, 0, ""};
  m.test = {"test.bin", n - n_test, n_test, 0, ""};
}

}  // namespace spinlearn::datasets

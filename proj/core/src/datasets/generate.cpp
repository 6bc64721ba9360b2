#include "spinlearn/datasets/generate.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "spinlearn/datasets/sha256.hpp"
#include "spinlearn/errors.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::datasets {

Sample generate_sample(const DatasetConfig& cfg, std::uint64_t id, std::uint64_t attempt) {
  Rng rng = Rng::child(cfg.root_seed, id, attempt);
  Sample s;
  s.id = id;
  s.attempt = attempt;
  s.init.p = cfg.p_range.sample(rng);
  if (cfg.constant_drive) {
    s.drive = drives::constant_drive(*cfg.constant_drive, cfg.gp.n, cfg.gp.dt);
  } else {
    auto draw = drives::draw_gaussian_drive(cfg.gp, rng);
    s.c0 = draw.c0;
    s.sigma = draw.sigma;
    s.drive = std::move(draw.drive);
  }
  const auto psi = qdyn::build_initial_state(s.init, cfg.model.sites);
  qdyn::EvolveOptions opts;
  opts.max_distance = cfg.resolved_max_distance();
  s.series = qdyn::evolve(psi, cfg.model, s.drive, cfg.integrator, opts);
  return s;
}

std::vector<Sample> generate_samples(const DatasetConfig& cfg, const GenerateOptions& options,
                                     std::vector<RetryRecord>* retries) {
  cfg.validate();
  const std::size_t n = cfg.n_samples;
  std::vector<Sample> out(n);
  std::vector<RetryRecord> failures(n);
  std::atomic<std::size_t> next{0}, done{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(error_mutex);
        if (error) return;
      }
      try {
        for (std::uint64_t attempt = 0;; ++attempt) {
          try {
            if (options.inject_failure && options.inject_failure(i, attempt)) {
              throw IntegrationError("injected failure", 0.0);
            }
            out[i] = generate_sample(cfg, i, attempt);
            break;
          } catch (const NumericError& e) {
            failures[i].id = i;
            failures[i].failed_attempts = attempt + 1;
            failures[i].last_error = e.what();
            if (attempt >= static_cast<std::uint64_t>(cfg.max_retries)) {
              throw NumericError("sample " + std::to_string(i) + " failed after " + std::to_string(attempt + 1) +
                                 " attempts: " + e.what());
            }
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (options.progress) options.progress(finished, n);
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  if (retries) {
    retries->clear();
    for (const auto& f : failures) {
      if (f.failed_attempts > 0) retries->push_back(f);
    }
  }
  return out;
}

std::int64_t default_timestamp() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& bytes) {
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

}  // namespace

Manifest generate_dataset(const DatasetConfig& cfg, const std::filesystem::path& dir, const GenerateOptions& options) {
  cfg.validate();
  if (std::filesystem::exists(dir / "manifest.json") && !options.force) {
    throw ConfigError("dataset already exists at " + dir.string() + " (use --force to overwrite)");
  }
  Manifest m;
  m.config = cfg;
  m.n_frames = cfg.n_frames();
  m.n_obs = cfg.n_obs();
  m.generated_at = options.timestamp;
  assign_splits(m);

  const auto samples = generate_samples(cfg, options, &m.retries);
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "manifest.json");
  for (Split split : {Split::kTrain, Split::kValidation, Split::kTest}) {
    SplitInfo& info = m.split(split);
    const std::span<const Sample> part(samples.data() + info.first_id, info.count);
    const std::string bytes = serialize_samples(part);
    info.bytes = bytes.size();
    info.sha256 = sha256_hex(bytes);
    write_file(dir / info.file, bytes);
  }
  write_file(dir / "manifest.json", nlohmann::json(m).dump(2) + "\n");
  return m;
}

}  // namespace spinlearn::datasets

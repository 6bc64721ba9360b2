#include "spinlearn/drives/eval_drives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinlearn::drives {

namespace {

void check_interval(const Interval& iv, const char* name) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.hi < iv.lo) {
    throw std::domain_error(std::string("invalid interval for ") + name);
  }
}

}  // namespace

EvalDriveConfig EvalDriveConfig::for_window(double window, std::uint64_t seed) {
  EvalDriveConfig cfg;
  cfg.quench_time_range = {0.1 * window, 0.9 * window};
  cfg.seed = seed;
  return cfg;
}

void EvalDriveConfig::validate() const {
  check_interval(amp_range, "periodic amplitude");
  check_interval(freq_range, "periodic frequency");
  check_interval(quench_height_range, "quench height");
  check_interval(quench_time_range, "quench time");
  if (quench_time_range.lo < 0.0) throw std::domain_error("quench times must be non-negative");
}

DriveTrajectory periodic_drive(double amplitude, double omega, std::size_t n, double dt) {
  DriveTrajectory d;
  d.dt = dt;
  d.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) d.values[k] = amplitude * std::sin(omega * static_cast<double>(k) * dt);
  return d;
}

DriveTrajectory quench_drive(double before, double after, std::size_t jump_index, std::size_t n, double dt) {
  DriveTrajectory d;
  d.dt = dt;
  d.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) d.values[k] = k < jump_index ? before : after;
  return d;
}

PeriodicDraw draw_periodic_drive(const EvalDriveConfig& cfg, std::size_t n, double dt, Rng& rng) {
  cfg.validate();
  PeriodicDraw draw;
  draw.amplitude = cfg.amp_range.sample(rng);
  draw.omega = cfg.freq_range.sample(rng);
  draw.drive = periodic_drive(draw.amplitude, draw.omega, n, dt);
  return draw;
}

QuenchDraw draw_quench_drive(const EvalDriveConfig& cfg, std::size_t n, double dt, Rng& rng) {
  cfg.validate();
  if (cfg.quench_time_range.hi > dt * static_cast<double>(n)) {
    throw std::domain_error("quench time range exceeds the drive window");
  }
  QuenchDraw draw;
  draw.before = cfg.quench_height_range.sample(rng);
  draw.after = cfg.quench_height_range.sample(rng);
  draw.jump_time = cfg.quench_time_range.sample(rng);
  draw.jump_index = std::min(static_cast<std::size_t>(std::floor(draw.jump_time / dt)), n);
  draw.drive = quench_drive(draw.before, draw.after, draw.jump_index, n, dt);
  return draw;
}

DriveTrajectory sample_periodic_drive(const EvalDriveConfig& cfg, std::size_t n, double dt) {
  Rng rng(cfg.seed);
  return draw_periodic_drive(cfg, n, dt, rng).drive;
}

DriveTrajectory sample_quench_drive(const EvalDriveConfig& cfg, std::size_t n, double dt) {
  Rng rng(cfg.seed);
  return draw_quench_drive(cfg, n, dt, rng).drive;
}

}  // namespace spinlearn::drives

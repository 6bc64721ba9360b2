#pragma once

#include <cstddef>
#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "spinlearn/drives/drive.hpp"
#include "spinlearn/drives/gaussian.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::drives {

/// Parameter ranges for the evaluation-only drive classes.
struct EvalDriveConfig {
  Interval amp_range{-3.0, 3.0};
  Interval freq_range{0.1, 4.0};
  Interval quench_height_range{-3.0, 3.0};
  Interval quench_time_range{0.7, 6.3};
  std::uint64_t seed = 0;

  /// Quench times in [0.1 T, 0.9 T] of a window of length T.
  static EvalDriveConfig for_window(double window, std::uint64_t seed = 0);

  void validate() const;
};

void to_json(nlohmann::json& j, const EvalDriveConfig& cfg);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, EvalDriveConfig& cfg);

/// values_k = amplitude * sin(omega * k * dt).
DriveTrajectory periodic_drive(double amplitude, double omega, std::size_t n, double dt);

/// before on k < jump_index, after on k >= jump_index.
DriveTrajectory quench_drive(double before, double after, std::size_t jump_index, std::size_t n, double dt);

struct PeriodicDraw {
  double amplitude = 0.0;
  double omega = 0.0;
  DriveTrajectory drive;
};

struct QuenchDraw {
  double before = 0.0;
  double after = 0.0;
  double jump_time = 0.0;
  std::size_t jump_index = 0;  // floor(jump_time / dt)
  DriveTrajectory drive;
};

/// Draw order: amplitude, omega.
PeriodicDraw draw_periodic_drive(const EvalDriveConfig& cfg, std::size_t n, double dt, Rng& rng);
/// Draw order: height before, height after, jump time.
QuenchDraw draw_quench_drive(const EvalDriveConfig& cfg, std::size_t n, double dt, Rng& rng);

/// Deterministic in cfg.seed.
DriveTrajectory sample_periodic_drive(const EvalDriveConfig& cfg, std::size_t n, double dt);
DriveTrajectory sample_quench_drive(const EvalDriveConfig& cfg, std::size_t n, double dt);

}  // namespace spinlearn::drives

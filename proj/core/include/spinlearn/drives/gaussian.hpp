#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "spinlearn/drives/drive.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::drives {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double sample(Rng& rng) const { return rng.uniform(lo, hi); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Mixture of stationary Gaussian processes: each trajectory first draws its
/// correlation amplitude c0 and correlation time sigma uniformly.
struct GpConfig {
  Interval c0_range{0.0, 4.0};
  Interval sigma_range{1.0, 9.0};
  std::size_t n = 57;
  double dt = 0.125;
  std::uint64_t seed = 0;

  /// Throws std::domain_error for empty/negative ranges or a bad grid.
  void validate() const;
};

void to_json(nlohmann::json& j, const Interval& r);
void from_json(const nlohmann::json& j, Interval& r);
/// `seed` is not serialized; datasets derive per-sample streams instead.
void to_json(nlohmann::json& j, const GpConfig& cfg);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, GpConfig& cfg);

/// Samples d = Q sqrt(Lambda) x for the kernel
/// C_nm = c0 exp(-(n - m)^2 dt^2 / (2 sigma^2)) with C = Q Lambda Q^T.
/// Eigenvalues are clamped at zero before the square root.
class GaussianKernelSampler {
 public:
  GaussianKernelSampler(double c0, double sigma, std::size_t n, double dt);

  DriveTrajectory sample(Rng& rng) const;
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

 private:
  Eigen::MatrixXd factor_;  // Q sqrt(Lambda)
  double dt_;
};

struct GaussianDraw {
  double c0 = 0.0;
  double sigma = 0.0;
  DriveTrajectory drive;
};

/// Draws c0, then sigma, then the n standard normals, all from `rng`.
GaussianDraw draw_gaussian_drive(const GpConfig& cfg, Rng& rng);

/// Deterministic in cfg.seed.
DriveTrajectory sample_gaussian_drive(const GpConfig& cfg);

}  // namespace spinlearn::drives

#pragma once

#include <cstddef>
#include <vector>

namespace spinlearn::drives {

/// Scalar control signal D(t) sampled on t_k = t0 + k * dt.
struct DriveTrajectory {
  std::vector<double> values;
  double dt = 0.0;
  double t0 = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double t_end() const noexcept { return t0 + dt * static_cast<double>(values.size() - 1); }

  /// Linear interpolation between grid points. Times within 1e-9 * dt of the
  /// grid ends clamp to the end values; anything further out is a domain error.
  double at(double t) const;

  /// Throws std::domain_error unless n >= 2, dt > 0 and all values finite.
  void validate() const;

  friend bool operator==(const DriveTrajectory&, const DriveTrajectory&) = default;
};

/// D(t) = value on n points.
DriveTrajectory constant_drive(double value, std::size_t n, double dt);

}  // namespace spinlearn::drives

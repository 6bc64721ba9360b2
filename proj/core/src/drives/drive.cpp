#include "spinlearn/drives/drive.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinlearn::drives {

double DriveTrajectory::at(double t) const {
  const double x = (t - t0) / dt;
  const double last = static_cast<double>(values.size() - 1);
  if (x < -1e-9 || x > last + 1e-9) {
    throw std::domain_error("drive evaluated at t=" + std::to_string(t) + " outside its grid [" +
                            std::to_string(t0) + ", " + std::to_string(t_end()) + "]");
  }
  if (x <= 0.0) return values.front();
  if (x >= last) return values.back();
  const auto k = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

void DriveTrajectory::validate() const {
  if (values.size() < 2) throw std::domain_error("drive trajectory needs at least 2 points");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::domain_error("drive grid spacing must be positive");
  for (const double v : values) {
    if (!std::isfinite(v)) throw std::domain_error("drive trajectory contains a non-finite value");
  }
}

DriveTrajectory constant_drive(double value, std::size_t n, double dt) {
  DriveTrajectory d;
  d.values.assign(n, value);
  d.dt = dt;
  return d;
}

}  // namespace spinlearn::drives

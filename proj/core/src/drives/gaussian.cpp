#include "spinlearn/drives/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "spinlearn/errors.hpp"

namespace spinlearn::drives {

void GpConfig::validate() const {
  if (!(c0_range.lo >= 0.0) || !(c0_range.hi >= c0_range.lo) || !std::isfinite(c0_range.hi)) {
    throw std::domain_error("GP amplitude range must satisfy 0 <= lo <= hi < inf");
  }
  if (!(sigma_range.lo > 0.0) || !(sigma_range.hi >= sigma_range.lo) || !std::isfinite(sigma_range.hi)) {
    throw std::domain_error("GP correlation-time range must satisfy 0 < lo <= hi < inf");
  }
  if (n < 2) throw std::domain_error("GP grid needs at least 2 points");
  if (!(dt > 0.0)) throw std::domain_error("GP grid spacing must be positive");
}

GaussianKernelSampler::GaussianKernelSampler(double c0, double sigma, std::size_t n, double dt) : dt_(dt) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd cov(N, N);
  for (Eigen::Index a = 0; a < N; ++a) {
    for (Eigen::Index b = 0; b < N; ++b) {
      const double lag = static_cast<double>(a - b) * dt;
      cov(a, b) = c0 * std::exp(-lag * lag / (2.0 * sigma * sigma));
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of the GP correlation matrix failed");
  }
  const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  factor_ = solver.eigenvectors() * root.asDiagonal();
}

DriveTrajectory GaussianKernelSampler::sample(Rng& rng) const {
  Eigen::VectorXd x(factor_.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
  const Eigen::VectorXd d = factor_ * x;
  DriveTrajectory out;
  out.values.assign(d.data(), d.data() + d.size());
  out.dt = dt_;
  return out;
}

GaussianDraw draw_gaussian_drive(const GpConfig& cfg, Rng& rng) {
  cfg.validate();
  GaussianDraw draw;
  draw.c0 = cfg.c0_range.sample(rng);
  draw.sigma = cfg.sigma_range.sample(rng);
  draw.drive = GaussianKernelSampler(draw.c0, draw.sigma, cfg.n, cfg.dt).sample(rng);
  return draw;
}

DriveTrajectory sample_gaussian_drive(const GpConfig& cfg) {
  Rng rng(cfg.seed);
  return draw_gaussian_drive(cfg, rng).drive;
}

}  // namespace spinlearn::drives

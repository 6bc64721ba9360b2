#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spinlearn/errors.hpp"

namespace spinlearn::qdyn {

/// How per-component scaled errors are combined into the step-control norm.
/// kEuclidean keeps the 2-norm of the error bounded independently of the
/// system size, which is what matters for a normalized state vector.
enum class ErrorNorm { kRms, kEuclidean };

struct StepperOptions {
  double atol = 1e-9;
  double rtol = 1e-9;
  double max_step = 0.0;  // 0: unbounded
  std::size_t max_steps = 50'000'000;
  ErrorNorm norm = ErrorNorm::kRms;
};

struct StepperStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Embedded Runge-Kutta 5(4) of Dormand and Prince with local extrapolation,
/// FSAL reuse and elementary step control:
///   err = rms_i |e_i| / (atol + rtol * max(|y_i|, |y_new_i|))  (or the 2-norm),
///   h_new = h * clamp(0.9 err^{-1/5}, 0.2, 10).
/// T is double or std::complex<double>; tolerances act on |y_i|.
template <typename T>
class DormandPrince45 {
 public:
  using Rhs = std::function<void(double t, std::span<const T> y, std::span<T> dydt)>;

  DormandPrince45(std::size_t n, StepperOptions options)
      : options_(options), k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), tmp_(n), next_(n) {}

  /// Integrates y from t to t_end, landing exactly on t_end. Internal step
  /// size and the FSAL derivative carry over between calls, so `f` must be
  /// continuous at t.
  void advance(const Rhs& f, double& t, std::vector<T>& y, double t_end) {
    if (t_end <= t) return;
    if (!fsal_valid_) {
      eval(f, t, y, k1_);
      fsal_valid_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(f, t, y, t_end);

    bool previous_rejected = false;
    while (t < t_end) {
      if (stats_.accepted + stats_.rejected >= options_.max_steps) {
        throw IntegrationError("step budget exhausted at t=" + std::to_string(t), t);
      }
      double h = h_;
      if (options_.max_step > 0.0) h = std::min(h, options_.max_step);
      const double remaining = t_end - t;
      const bool last = h >= remaining * (1.0 - 1e-12);
      if (last) h = remaining;

      const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h < min_step) {
        throw IntegrationError("step size underflow at t=" + std::to_string(t), t);
      }

      const double err = attempt(f, t, y, h);
      if (err <= 1.0) {
        t = last ? t_end : t + h;
        std::swap(y, next_);
        std::swap(k1_, k7_);
        ++stats_.accepted;
        double factor = err == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
        if (previous_rejected) factor = std::min(factor, 1.0);
        const double proposal = h * factor;
        // A clipped final step says little about the natural step size.
        h_ = last ? std::max(h_, proposal) : proposal;
        previous_rejected = false;
      } else {
        ++stats_.rejected;
        h_ = h * std::max(kMinFactor, kSafety * std::pow(err, -0.2));
        previous_rejected = true;
      }
    }
  }

  /// Keeps the cached derivative consistent after the caller multiplied y by
  /// `factor`. Only valid for right-hand sides that are linear in y.
  void rescale_linear(double factor) {
    for (auto& v : k1_) v *= factor;
  }

  /// Forget the cached derivative (after modifying y or jumping in t).
  void reset() {
    fsal_valid_ = false;
    h_ = 0.0;
  }

  const StepperStats& stats() const noexcept { return stats_; }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kMinFactor = 0.2;
  static constexpr double kMaxFactor = 10.0;

  void eval(const Rhs& f, double t, const std::vector<T>& y, std::vector<T>& out) {
    ++stats_.rhs_evaluations;
    f(t, y, out);
  }

  double scale(double a, double b) const { return options_.atol + options_.rtol * std::max(a, b); }

  double initial_step(const Rhs& f, double t, const std::vector<T>& y, double t_end) {
    const std::size_t n = y.size();
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = scale(std::abs(y[i]), 0.0);
      d0 += std::norm(y[i] / sc);
      d1 += std::norm(k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h0 * k1_[i];
    eval(f, t + h0, tmp_, k2_);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = scale(std::abs(y[i]), 0.0);
      d2 += std::norm((k2_[i] - k1_[i]) / sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min(100.0 * h0, h1);
  }

  // One trial step of size h from (t, y); result in next_, derivative at the
  // new point in k7_. Returns the scaled error norm.
  double attempt(const Rhs& f, double t, const std::vector<T>& y, double h) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (kA21 * k1_[i]);
    eval(f, t + kC2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (kA31 * k1_[i] + kA32 * k2_[i]);
    eval(f, t + kC3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (kA41 * k1_[i] + kA42 * k2_[i] + kA43 * k3_[i]);
    eval(f, t + kC4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (kA51 * k1_[i] + kA52 * k2_[i] + kA53 * k3_[i] + kA54 * k4_[i]);
    }
    eval(f, t + kC5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (kA61 * k1_[i] + kA62 * k2_[i] + kA63 * k3_[i] + kA64 * k4_[i] + kA65 * k5_[i]);
    }
    eval(f, t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n; ++i) {
      next_[i] = y[i] + h * (kB1 * k1_[i] + kB3 * k3_[i] + kB4 * k4_[i] + kB5 * k5_[i] + kB6 * k6_[i]);
    }
    eval(f, t + h, next_, k7_);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const T e = h * (kE1 * k1_[i] + kE3 * k3_[i] + kE4 * k4_[i] + kE5 * k5_[i] + kE6 * k6_[i] + kE7 * k7_[i]);
      const double sc = scale(std::abs(y[i]), std::abs(next_[i]));
      err += std::norm(e) / (sc * sc);
    }
    return options_.norm == ErrorNorm::kRms ? std::sqrt(err / static_cast<double>(n)) : std::sqrt(err);
  }

  static constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
  static constexpr double kA21 = 1.0 / 5.0;
  static constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
  static constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
  static constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                          kA54 = -212.0 / 729.0;
  static constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                          kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
  static constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                          kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
  static constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                          kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

  StepperOptions options_;
  StepperStats stats_;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  std::vector<T> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, next_;
};

}  // namespace spinlearn::qdyn

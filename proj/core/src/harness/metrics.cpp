#include "spinlearn/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinlearn::harness {

ErrorCurves error_curves(std::span<const qdyn::ObservableSeries> predicted,
                         std::span<const qdyn::ObservableSeries> truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw std::invalid_argument("error_curves: need equally many predicted and true series");
  }
  const std::size_t n_frames = truth.front().size();
  const std::size_t n_obs = qdyn::observable_count(truth.front().max_distance());
  std::vector<double> sum_t(n_frames, 0.0), sum_o(n_obs, 0.0);
  std::vector<std::size_t> count(n_frames, 0);
  std::size_t entries = 0, violations = 0, frames_total = 0;
  for (std::size_t s = 0; s < truth.size(); ++s) {
    if (truth[s].size() != n_frames) throw std::invalid_argument("error_curves: true series lengths differ");
    if (predicted[s].size() > n_frames) throw std::invalid_argument("error_curves: prediction longer than truth");
    for (std::size_t k = 0; k < predicted[s].size(); ++k) {
      const auto p = predicted[s].frames[k].flatten();
      const auto q = truth[s].frames[k].flatten();
      if (p.size() != n_obs || q.size() != n_obs) throw std::invalid_argument("error_curves: observable counts differ");
      double frame = 0.0;
      for (std::size_t j = 0; j < n_obs; ++j) {
        const double d = p[j] - q[j];
        frame += d * d;
        sum_o[j] += d * d;
        violations += std::abs(p[j]) > 1.0;
      }
      sum_t[k] += frame;
      ++count[k];
      entries += n_obs;
      ++frames_total;
    }
  }
  ErrorCurves c;
  c.t.resize(n_frames);
  c.rmse.resize(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    c.t[k] = truth.front().time(k);
    c.rmse[k] = count[k] ? std::sqrt(sum_t[k] / static_cast<double>(count[k] * n_obs))
                         : std::numeric_limits<double>::infinity();
  }
  c.count = std::move(count);
  c.per_observable.resize(n_obs);
  for (std::size_t j = 0; j < n_obs; ++j) {
    c.per_observable[j] = frames_total ? std::sqrt(sum_o[j] / static_cast<double>(frames_total)) : 0.0;
  }
  c.physicality_violation_rate = entries ? static_cast<double>(violations) / static_cast<double>(entries) : 0.0;
  return c;
}

namespace {

template <typename F>
void for_window(const ErrorCurves& c, double lo, double hi, F&& f) {
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    if (c.t[k] >= lo - 1e-9 && c.t[k] <= hi + 1e-9) f(c.rmse[k]);
  }
}

}  // namespace

double window_mean(const ErrorCurves& curves, double lo, double hi) {
  double sum = 0.0;
  std::size_t n = 0;
  for_window(curves, lo, hi, [&](double v) {
    sum += v;
    ++n;
  });
  if (n == 0) throw std::invalid_argument("window_mean: empty window");
  return sum / static_cast<double>(n);
}

double window_max(const ErrorCurves& curves, double lo, double hi) {
  double m = -std::numeric_limits<double>::infinity();
  for_window(curves, lo, hi, [&](double v) { m = std::max(m, v); });
  return m;
}

std::vector<double> zero_prediction_rmse(std::span<const qdyn::ObservableSeries> truth) {
  if (truth.empty()) return {};
  const std::size_t n_frames = truth.front().size();
  std::vector<double> sum(n_frames, 0.0);
  std::size_t n_obs = 0;
  for (const auto& s : truth) {
    for (std::size_t k = 0; k < n_frames; ++k) {
      const auto q = s.frames[k].flatten();
      n_obs = q.size();
      for (double v : q) sum[k] += v * v;
    }
  }
  for (auto& v : sum) v = std::sqrt(v / static_cast<double>(truth.size() * n_obs));
  return sum;
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - b * sx) / n, b};
}

}  // namespace spinlearn::harness

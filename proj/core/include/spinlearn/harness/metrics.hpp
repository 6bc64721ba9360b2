#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinlearn/qdyn/observables.hpp"

namespace spinlearn::harness {

/// Error statistics of predicted against true series on a common grid.
struct ErrorCurves {
  std::vector<double> t;
  /// sqrt of the squared deviation averaged over samples and observables, per frame.
  std::vector<double> rmse;
  /// Number of samples contributing at each frame (truncated predictions drop out).
  std::vector<std::size_t> count;
  /// sqrt of the squared deviation averaged over samples and frames, per observable.
  std::vector<double> per_observable;
  /// Fraction of predicted entries with |value| > 1.
  double physicality_violation_rate = 0.0;
};

/// `predicted[i]` may be shorter than `truth[i]` (e.g. a closure run that broke
/// down); missing frames are excluded from the averages at those times. Frames
/// where no sample contributes get rmse = +inf.
ErrorCurves error_curves(std::span<const qdyn::ObservableSeries> predicted,
                         std::span<const qdyn::ObservableSeries> truth);

/// Mean of rmse(t) over frames with lo <= t <= hi (1e-9 slack on both ends).
double window_mean(const ErrorCurves& curves, double lo, double hi);
/// Largest rmse(t) over the same frames.
double window_max(const ErrorCurves& curves, double lo, double hi);

/// Root mean square of the true values per frame: the error of a model that
/// always predicts zero.
std::vector<double> zero_prediction_rmse(std::span<const qdyn::ObservableSeries> truth);

/// Least-squares fit y = a + b x; returns {a, b}.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace spinlearn::harness

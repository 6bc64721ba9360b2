#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "spinlearn/harness/evaluate.hpp"

namespace spinlearn::harness {

/// One row per frame: t,count,network,zero_baseline[,closure,closure_count][,entropy].
std::string curve_csv(const ClassReport& c);

/// class,samples,in_window_mean,extrapolation_mean,extrapolation_max,
/// baseline_margin_min,physicality_violation_rate,closure_breakdowns,closure_ordering
std::string summary_csv(const EvalReport& report);

/// observable,<class>,... with the per-observable error of each class.
std::string per_observable_csv(const EvalReport& report);

/// Writes summary.csv, per_observable.csv, rmse_<class>.csv/.svg,
/// entropy.svg (if computed) and timing.txt into `dir`. Everything except
/// timing.txt depends only on the report contents.
void write_report(const EvalReport& report, const std::filesystem::path& dir);

/// predictions_<class>.csv: id,k,t, then the predicted and the true value of
/// every observable (pred_X,...,true_X,...). Frames missing from a prediction
/// are omitted.
void write_prediction_dump(const Predictions& predictions, std::span<const EvalSuite> suites,
                           const std::filesystem::path& dir);

}  // namespace spinlearn::harness

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spinlearn/datasets/format.hpp"
#include "spinlearn/harness/config.hpp"
#include "spinlearn/harness/metrics.hpp"
#include "spinlearn/harness/pipeline.hpp"
#include "spinlearn/neural/surrogate.hpp"

namespace spinlearn::harness {

/// Reference trajectories of one drive class on the evaluation grid.
struct EvalSuite {
  DriveClass kind = DriveClass::kGaussian;
  std::vector<datasets::Sample> samples;
  /// Half-chain entropy per sample and frame; empty unless requested.
  std::vector<std::vector<double>> entropy;
};

/// Root seed of the evaluation streams. Derived by hashing so that evaluation
/// drives never share a stream with a dataset using the same numeric seed.
std::uint64_t eval_root_seed(std::uint64_t seed);

/// Draws and integrates one suite. Sample i of class c uses
/// Rng::child(eval_root_seed(cfg.seed), c, i): p first (random init), then the drive.
EvalSuite build_suite(const qdyn::SpinModel& model, int max_distance, const EvalConfig& cfg, DriveClass kind,
                      unsigned workers = 1);

/// All classes of `cfg`, cached under ws.root/suites/<hash>/ .
std::vector<EvalSuite> ensure_suites(const Workspace& ws, const qdyn::SpinModel& model, int max_distance,
                                     const EvalConfig& cfg);

struct ClassReport {
  DriveClass kind = DriveClass::kGaussian;
  std::size_t samples = 0;
  ErrorCurves network;
  /// Error of the all-zero-parameter network of the same shape.
  std::vector<double> zero_baseline;
  bool has_closure = false;
  ErrorCurves closure;
  std::size_t closure_breakdowns = 0;
  /// Fraction of frames with t > 0 where the network error is below the closure error.
  double closure_ordering = 0.0;
  std::vector<double> entropy_mean;
};

struct EvalReport {
  std::string label;
  double train_t_max = 0.0;
  double eval_t_max = 0.0;
  std::vector<std::string> observables;
  std::vector<ClassReport> classes;
  /// Wall-clock seconds per stage; not part of the reproducible artifacts.
  std::vector<std::pair<std::string, double>> timing;

  const ClassReport& at(DriveClass kind) const;
  double in_window_mean(DriveClass kind) const;
  double extrapolation_mean(DriveClass kind) const;
};

/// Predictions of every suite sample, in suite order.
using Predictions = std::vector<std::vector<qdyn::ObservableSeries>>;

Predictions predict_suites(const neural::Surrogate& model, std::span<const EvalSuite> suites);

/// Builds the report from given predictions. `zero_model` supplies the zero
/// baseline; `closure_model` non-null enables the closure comparison.
EvalReport evaluate_predictions(const Predictions& predictions, std::span<const EvalSuite> suites,
                                const neural::Surrogate& zero_model, double train_t_max,
                                const qdyn::SpinModel* closure_model = nullptr,
                                const qdyn::IntegratorConfig* closure_integrator = nullptr, unsigned workers = 1);

struct EvalOutput {
  EvalReport report;
  Predictions predictions;
};

/// Network predictions, zero baseline and (optionally) closure on all suites.
EvalOutput evaluate_model(const neural::Surrogate& model, const qdyn::SpinModel& spin_model,
                          std::span<const EvalSuite> suites, const EvalConfig& cfg, double train_t_max,
                          unsigned workers = 1);

/// eval / baseline subcommands: resolve the model, build suites, write the report.
EvalReport run_eval(const Workspace& ws, const EvalCommand& cmd);

}  // namespace spinlearn::harness

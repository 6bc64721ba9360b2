#pragma once

#include <cstddef>
#include <functional>

#include <nlohmann/json_fwd.hpp>

#include "spinlearn/drives/drive.hpp"
#include "spinlearn/qdyn/dormand_prince.hpp"
#include "spinlearn/qdyn/observables.hpp"
#include "spinlearn/qdyn/spin_model.hpp"
#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::qdyn {

/// Adaptive integration settings and the observation grid t_k = k * dt_sample,
/// k = 0..floor(t_max / dt_sample).
struct IntegratorConfig {
  double atol = 1e-9;
  double rtol = 1e-9;
  double dt_sample = 0.125;
  double t_max = 7.0;
  double max_step = 0.0;  // 0: unbounded
  std::size_t max_steps = 50'000'000;
  /// Project the state back onto the unit sphere at every drive-grid and
  /// sample point.
  bool renormalize = true;

  /// Loose tolerances used for runtime comparisons against the surrogate.
  static IntegratorConfig relaxed(double dt_sample, double t_max);

  std::size_t sample_count() const;
  /// Error control on the Euclidean norm of the local error.
  StepperOptions stepper_options() const { return {atol, rtol, max_step, max_steps, ErrorNorm::kEuclidean}; }

  /// Throws std::domain_error on non-positive tolerances or grid.
  void validate() const;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

void to_json(nlohmann::json& j, const IntegratorConfig& cfg);
void from_json(const nlohmann::json& j, IntegratorConfig& cfg);

/// Invoked with the evolved state at every sample time, including t = 0.
using SampleObserver = std::function<void(std::size_t k, double t, const StateVector& state)>;

struct EvolveOptions {
  int max_distance = -1;  // -1: floor(M/2)
  SampleObserver observer;
  StepperStats* stats = nullptr;
};

/// Integrates i d/dt psi = H(D(t)) psi and measures every sample time.
///
/// Steps never straddle a drive grid point, so the linearly interpolated drive
/// is smooth within each step. Throws std::domain_error when the state does
/// not match the model or the drive does not cover [0, t_max], and
/// IntegrationError (with the time reached) on step-size underflow.
ObservableSeries evolve(const StateVector& initial, const SpinModel& model, const drives::DriveTrajectory& drive,
                        const IntegratorConfig& cfg, const EvolveOptions& options = {});

}  // namespace spinlearn::qdyn

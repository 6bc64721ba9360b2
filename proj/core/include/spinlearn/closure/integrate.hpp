#pragma once

#include "spinlearn/closure/moment_equations.hpp"
#include "spinlearn/drives/drive.hpp"
#include "spinlearn/qdyn/evolve.hpp"
#include "spinlearn/qdyn/observables.hpp"
#include "spinlearn/qdyn/spin_model.hpp"
#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::closure {

/// Moments leaving [-kBreakdownBound, kBreakdownBound] flag a closure breakdown.
inline constexpr double kBreakdownBound = 1.5;

struct ClosureResult {
  /// Frames up to (excluding) the first sample that left the band.
  qdyn::ObservableSeries series;
  bool breakdown = false;
  /// Sample time of the first out-of-band frame, or the time the integrator
  /// gave up. Meaningless when breakdown is false.
  double breakdown_time = 0.0;
};

/// Integrates the closed moment equations from the product-state moments of
/// `init` with the same adaptive scheme and sample grid as qdyn::evolve.
/// Only the transverse-field Ising model is supported (std::domain_error
/// otherwise).
ClosureResult integrate_closure(const qdyn::ProductStateSpec& init, const drives::DriveTrajectory& drive,
                                const qdyn::SpinModel& model, const qdyn::IntegratorConfig& cfg);

}  // namespace spinlearn::closure

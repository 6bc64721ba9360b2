#include "spinlearn/closure/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinlearn/errors.hpp"
#include "spinlearn/qdyn/dormand_prince.hpp"

namespace spinlearn::closure {

namespace {

bool in_band(const std::vector<double>& y) {
  return std::all_of(y.begin(), y.end(),
                     [](double v) { return std::isfinite(v) && std::abs(v) <= kBreakdownBound; });
}

}  // namespace

ClosureResult integrate_closure(const qdyn::ProductStateSpec& init, const drives::DriveTrajectory& drive,
                                const qdyn::SpinModel& model, const qdyn::IntegratorConfig& cfg) {
  model.validate();
  cfg.validate();
  drive.validate();
  if (model.kind != qdyn::ModelKind::kTfi) {
    throw std::domain_error("moment closure is implemented for the transverse-field Ising model only");
  }
  if (drive.t0 > 1e-12 || drive.t_end() < cfg.t_max - 1e-9 * cfg.dt_sample) {
    throw std::domain_error("drive grid does not cover [0, t_max]");
  }
  const MomentEquations equations(model.sites, -1, model.J);
  std::vector<double> y = product_moments(init, equations.max_distance()).flatten();

  const auto rhs = [&](double t, std::span<const double> state, std::span<double> dydt) {
    equations.rhs(drive.at(t), state, dydt);
  };
  qdyn::DormandPrince45<double> stepper(y.size(), cfg.stepper_options());

  ClosureResult result;
  result.series.dt = cfg.dt_sample;
  const std::size_t n_samples = cfg.sample_count();
  result.series.frames.reserve(n_samples);
  result.series.frames.push_back(MomentState::from_flat(y).to_frame());

  double t = 0.0;
  try {
    for (std::size_t k = 1; k < n_samples; ++k) {
      const double t_sample = static_cast<double>(k) * cfg.dt_sample;
      while (true) {
        const double next_grid = drive.t0 + drive.dt * std::floor((t - drive.t0) / drive.dt + 1.0 + 1e-9);
        if (next_grid >= t_sample - 1e-12 * std::max(1.0, t_sample)) break;
        stepper.advance(rhs, t, y, next_grid);
        if (!in_band(y)) {
          result.breakdown = true;
          result.breakdown_time = t_sample;
          return result;
        }
      }
      stepper.advance(rhs, t, y, t_sample);
      t = t_sample;
      if (!in_band(y)) {
        result.breakdown = true;
        result.breakdown_time = t_sample;
        return result;
      }
      result.series.frames.push_back(MomentState::from_flat(y).to_frame());
    }
  } catch (const IntegrationError& e) {
    result.breakdown = true;
    result.breakdown_time = e.time_reached();
  }
  return result;
}

}  // namespace spinlearn::closure

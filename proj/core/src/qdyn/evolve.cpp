#include "spinlearn/qdyn/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "spinlearn/qdyn/hamiltonian.hpp"

namespace spinlearn::qdyn {

IntegratorConfig IntegratorConfig::relaxed(double dt_sample, double t_max) {
  IntegratorConfig cfg;
  cfg.atol = 1e-5;
  cfg.rtol = 1e-3;
  cfg.dt_sample = dt_sample;
  cfg.t_max = t_max;
  return cfg;
}

std::size_t IntegratorConfig::sample_count() const {
  return static_cast<std::size_t>(std::floor(t_max / dt_sample + 1e-9)) + 1;
}

void IntegratorConfig::validate() const {
  if (!(atol > 0.0) || !(rtol > 0.0)) throw std::domain_error("integrator tolerances must be positive");
  if (!(dt_sample > 0.0)) throw std::domain_error("sample spacing must be positive");
  if (!(t_max >= dt_sample)) throw std::domain_error("t_max must be at least one sample spacing");
  if (max_step < 0.0) throw std::domain_error("max_step must be non-negative");
}

void to_json(nlohmann::json& j, const IntegratorConfig& cfg) {
  j = nlohmann::json{{"atol", cfg.atol},           {"rtol", cfg.rtol},         {"dt_sample", cfg.dt_sample},
                     {"t_max", cfg.t_max},         {"max_step", cfg.max_step}, {"max_steps", cfg.max_steps},
                     {"renormalize", cfg.renormalize}};
}

void from_json(const nlohmann::json& j, IntegratorConfig& cfg) {
  cfg = IntegratorConfig{};
  cfg.atol = j.value("atol", cfg.atol);
  cfg.rtol = j.value("rtol", cfg.rtol);
  cfg.dt_sample = j.value("dt_sample", cfg.dt_sample);
  cfg.t_max = j.value("t_max", cfg.t_max);
  cfg.max_step = j.value("max_step", cfg.max_step);
  cfg.max_steps = j.value("max_steps", cfg.max_steps);
  cfg.renormalize = j.value("renormalize", cfg.renormalize);
}

ObservableSeries evolve(const StateVector& initial, const SpinModel& model, const drives::DriveTrajectory& drive,
                        const IntegratorConfig& cfg, const EvolveOptions& options) {
  model.validate();
  cfg.validate();
  drive.validate();
  if (initial.sites() != model.sites) {
    throw std::domain_error("state has " + std::to_string(initial.sites()) + " sites but the model has " +
                            std::to_string(model.sites));
  }
  if (drive.t0 > 1e-12 || drive.t_end() < cfg.t_max - 1e-9 * cfg.dt_sample) {
    throw std::domain_error("drive grid does not cover [0, t_max]");
  }
  const int max_distance = options.max_distance < 0 ? default_max_distance(model.sites) : options.max_distance;

  const Hamiltonian hamiltonian(model);
  const auto rhs = [&](double t, std::span<const Amplitude> psi, std::span<Amplitude> dpsi) {
    hamiltonian.apply(drive.at(t), psi, dpsi);
    for (auto& v : dpsi) v = Amplitude(v.imag(), -v.real());  // -i * v
  };

  DormandPrince45<Amplitude> stepper(initial.dimension(), cfg.stepper_options());
  std::vector<Amplitude> psi(initial.amplitudes().begin(), initial.amplitudes().end());

  ObservableSeries series;
  series.dt = cfg.dt_sample;
  const std::size_t n_samples = cfg.sample_count();
  series.frames.reserve(n_samples);

  auto record = [&](std::size_t k, double t) {
    const StateVector snapshot = StateVector::unchecked(model.sites, psi);
    series.frames.push_back(measure(snapshot, max_distance));
    if (options.observer) options.observer(k, t, snapshot);
  };

  auto project = [&] {
    if (!cfg.renormalize) return;
    double norm2 = 0.0;
    for (const auto& v : psi) norm2 += std::norm(v);
    const double factor = 1.0 / std::sqrt(norm2);
    for (auto& v : psi) v *= factor;
    stepper.rescale_linear(factor);
  };

  double t = 0.0;
  record(0, 0.0);
  for (std::size_t k = 1; k < n_samples; ++k) {
    const double t_sample = static_cast<double>(k) * cfg.dt_sample;
    // Advance through every drive grid point before the sample time.
    while (true) {
      const double next_grid =
          drive.t0 + drive.dt * std::floor((t - drive.t0) / drive.dt + 1.0 + 1e-9);
      if (next_grid >= t_sample - 1e-12 * std::max(1.0, t_sample)) break;
      stepper.advance(rhs, t, psi, next_grid);
      project();
    }
    stepper.advance(rhs, t, psi, t_sample);
    t = t_sample;
    project();
    record(k, t);
  }
  if (options.stats) *options.stats = stepper.stats();
  return series;
}

}  // namespace spinlearn::qdyn

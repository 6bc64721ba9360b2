#include <nlohmann/json.hpp>

#include "spinlearn/drives/eval_drives.hpp"
#include "spinlearn/drives/gaussian.hpp"

namespace spinlearn::drives {

void to_json(nlohmann::json& j, const Interval& r) { j = nlohmann::json::array({r.lo, r.hi}); }

void from_json(const nlohmann::json& j, Interval& r) {
  if (!j.is_array() || j.size() != 2) throw nlohmann::json::type_error::create(302, "interval must be [lo, hi]", &j);
  r.lo = j[0].get<double>();
  r.hi = j[1].get<double>();
}

void to_json(nlohmann::json& j, const GpConfig& cfg) {
  j = nlohmann::json{{"c0_range", cfg.c0_range}, {"sigma_range", cfg.sigma_range}, {"n", cfg.n}, {"dt", cfg.dt}};
}

void from_json(const nlohmann::json& j, GpConfig& cfg) {
  cfg.c0_range = j.value("c0_range", cfg.c0_range);
  cfg.sigma_range = j.value("sigma_range", cfg.sigma_range);
  cfg.n = j.value("n", cfg.n);
  cfg.dt = j.value("dt", cfg.dt);
}

void to_json(nlohmann::json& j, const EvalDriveConfig& cfg) {
  j = nlohmann::json{{"amp_range", cfg.amp_range},
                     {"freq_range", cfg.freq_range},
                     {"quench_height_range", cfg.quench_height_range},
                     {"quench_time_range", cfg.quench_time_range}};
}

void from_json(const nlohmann::json& j, EvalDriveConfig& cfg) {
  cfg.amp_range = j.value("amp_range", cfg.amp_range);
  cfg.freq_range = j.value("freq_range", cfg.freq_range);
  cfg.quench_height_range = j.value("quench_height_range", cfg.quench_height_range);
  cfg.quench_time_range = j.value("quench_time_range", cfg.quench_time_range);
}

}  // namespace spinlearn::drives

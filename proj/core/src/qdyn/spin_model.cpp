#include "spinlearn/qdyn/spin_model.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace spinlearn::qdyn {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTfi:
      return "tfi";
    case ModelKind::kTfiLongitudinal:
      return "tfi_longitudinal";
    case ModelKind::kHeisenberg:
      return "heisenberg";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "tfi") return ModelKind::kTfi;
  if (name == "tfi_longitudinal") return ModelKind::kTfiLongitudinal;
  if (name == "heisenberg") return ModelKind::kHeisenberg;
  throw std::domain_error("unknown model kind '" + std::string(name) + "'");
}

SpinModel SpinModel::tfi(int sites, double J) {
  SpinModel m;
  m.kind = ModelKind::kTfi;
  m.sites = sites;
  m.J = J;
  return m;
}

SpinModel SpinModel::tfi_longitudinal(int sites, double g, double J) {
  SpinModel m;
  m.kind = ModelKind::kTfiLongitudinal;
  m.sites = sites;
  m.J = J;
  m.g = g;
  return m;
}

SpinModel SpinModel::heisenberg(int sites, double Jy, double Jz) {
  SpinModel m;
  m.kind = ModelKind::kHeisenberg;
  m.sites = sites;
  m.Jy = Jy;
  m.Jz = Jz;
  return m;
}

void SpinModel::validate() const {
  if (sites < 1 || sites > kMaxSites) {
    throw std::domain_error("site count must lie in [1, " + std::to_string(kMaxSites) + "], got " +
                            std::to_string(sites));
  }
  if (!std::isfinite(J) || !std::isfinite(g) || !std::isfinite(Jy) || !std::isfinite(Jz)) {
    throw std::domain_error("couplings must be finite");
  }
  if (kind == ModelKind::kTfi && g != 0.0) {
    throw std::domain_error("the pure transverse-field model requires g = 0");
  }
}

void to_json(nlohmann::json& j, const SpinModel& model) {
  j = nlohmann::json{{"kind", std::string(to_string(model.kind))},
                     {"M", model.sites},
                     {"J", model.J},
                     {"g", model.g},
                     {"Jy", model.Jy},
                     {"Jz", model.Jz}};
}

void from_json(const nlohmann::json& j, SpinModel& model) {
  model = SpinModel{};
  model.kind = model_kind_from_string(j.at("kind").get<std::string>());
  model.sites = j.at("M").get<int>();
  model.J = j.value("J", 1.0);
  model.g = j.value("g", 0.0);
  model.Jy = j.value("Jy", 1.0);
  model.Jz = j.value("Jz", 1.0);
}

}  // namespace spinlearn::qdyn

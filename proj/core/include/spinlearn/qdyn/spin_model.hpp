#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace spinlearn::qdyn {

enum class ModelKind {
  kTfi,              // B(t) sum X_i + J sum Z_i Z_{i+1}
  kTfiLongitudinal,  // adds g sum Z_i; breaks integrability
  kHeisenberg,       // J_x(t) sum X X + J_y sum Y Y + J_z sum Z Z
};

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Homogeneous spin-1/2 ring with periodic boundary (site M wraps to site 0).
///
/// The scalar drive supplied to the evolution binds to B(t) for the Ising
/// kinds and to J_x(t) for the Heisenberg kind.
struct SpinModel {
  ModelKind kind = ModelKind::kTfi;
  int sites = 2;
  double J = 1.0;
  double g = 0.0;
  double Jy = 1.0;
  double Jz = 1.0;

  static SpinModel tfi(int sites, double J = 1.0);
  static SpinModel tfi_longitudinal(int sites, double g, double J = 1.0);
  static SpinModel heisenberg(int sites, double Jy = 1.0, double Jz = 1.0);

  /// Throws std::domain_error on an inconsistent model. Single-site rings are
  /// accepted (the bond term degenerates to a constant); dataset and CLI
  /// layers impose sites >= 2.
  void validate() const;

  std::string drive_symbol() const { return kind == ModelKind::kHeisenberg ? "Jx" : "B"; }

  friend bool operator==(const SpinModel&, const SpinModel&) = default;
};

/// Largest representable ring; the state vector holds 2^sites amplitudes.
inline constexpr int kMaxSites = 26;

void to_json(nlohmann::json& j, const SpinModel& model);
void from_json(const nlohmann::json& j, SpinModel& model);

}  // namespace spinlearn::qdyn

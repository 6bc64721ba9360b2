#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "spinlearn/qdyn/observables.hpp"
#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::closure {

/// First moments <s^n> and two-point moments <s^m_j s^n_{j+l}>, l = 1..L,
/// in the flat observable layout of qdyn::ObservableFrame.
struct MomentState {
  std::array<double, 3> first{};
  std::vector<double> second;  // 9 * L, index 9(l-1) + 3m + n

  int max_distance() const noexcept { return static_cast<int>(second.size() / 9); }
  std::size_t size() const noexcept { return 3 + second.size(); }

  std::vector<double> flatten() const;
  static MomentState from_flat(std::span<const double> flat);
  qdyn::ObservableFrame to_frame() const;
  static MomentState from_frame(const qdyn::ObservableFrame& frame);

  friend bool operator==(const MomentState&, const MomentState&) = default;
};

/// Moments of the product state (sqrt(p), sqrt(1-p))^M.
MomentState product_moments(const qdyn::ProductStateSpec& spec, int max_distance);

/// One term c * [B] * y_{v0} * y_{v1} * ... of a right-hand side.
struct Monomial {
  double coefficient = 0.0;
  bool scales_with_drive = false;
  std::vector<int> variables;  // sorted flat indices, at most 3
};

/// One term c * [B] * <P> of the exact equation of motion, with P a Pauli
/// string on distinct sites (empty for the identity).
struct PauliTerm {
  double coefficient = 0.0;
  bool scales_with_drive = false;
  std::vector<qdyn::PauliFactor> factors;
};

/// Closed first- and second-moment equations of the transverse-field Ising ring
/// H = B(t) sum_i s^x_i + J sum_i s^z_i s^z_{i+1}.
///
/// Derived symbolically from d<O>/dt = i<[H, O]>. Products on a shared site are
/// reduced exactly, distances beyond L are folded back by ring symmetry, and
/// three-site strings are replaced by their Gaussian factorization
///   <ABC> = <AB><C> + <BC><A> + <AC><B> - 2<A><B><C>.
class MomentEquations {
 public:
  /// Throws std::domain_error unless sites >= 2 and 1 <= max_distance <= sites/2.
  /// max_distance = -1 selects floor(sites/2).
  explicit MomentEquations(int sites, int max_distance = -1, double coupling = 1.0);

  int sites() const noexcept { return sites_; }
  int max_distance() const noexcept { return max_distance_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Monomial>& terms(std::size_t variable) const { return terms_.at(variable); }
  /// i<[H, O]> before factorization, for O anchored at site 0.
  const std::vector<PauliTerm>& exact_terms(std::size_t variable) const { return exact_terms_.at(variable); }

  void rhs(double drive, std::span<const double> y, std::span<double> dydt) const;
  MomentState rhs(const MomentState& state, double drive) const;

 private:
  int sites_;
  int max_distance_;
  std::vector<std::vector<Monomial>> terms_;
  std::vector<std::vector<PauliTerm>> exact_terms_;
};

/// Convenience wrapper building the equations for one evaluation.
MomentState moment_rhs(const MomentState& state, double drive, int sites, double coupling = 1.0);

}  // namespace spinlearn::closure

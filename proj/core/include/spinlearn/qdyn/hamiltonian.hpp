#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spinlearn/qdyn/spin_model.hpp"
#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::qdyn {

/// Matrix-free Hamiltonian of a driven ring.
///
/// The time-independent diagonal (Z Z bonds, longitudinal field) is tabulated
/// once; off-diagonal Pauli terms act by flipping bits of the basis index.
/// Memory is O(2^M).
class Hamiltonian {
 public:
  explicit Hamiltonian(const SpinModel& model);

  /// out = H(drive) in. `drive` is B for the Ising kinds and J_x for Heisenberg.
  void apply(double drive, std::span<const Amplitude> in, std::span<Amplitude> out) const;

  const SpinModel& model() const noexcept { return model_; }
  std::size_t dimension() const noexcept { return diagonal_.size(); }

 private:
  SpinModel model_;
  std::vector<double> diagonal_;
  // One two-bit mask per bond (i, i+1 mod M); single-bit masks per site.
  std::vector<std::uint64_t> bond_masks_;
  std::vector<std::uint64_t> site_masks_;
};

/// <psi| H(drive_value) |psi>. Throws std::domain_error on dimension mismatch
/// or when the imaginary residue exceeds 1e-10.
double energy_expectation(const StateVector& state, const SpinModel& model, double drive_value);

}  // namespace spinlearn::qdyn

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace spinlearn::qdyn {

using Amplitude = std::complex<double>;

/// Basis convention: bit i of a basis index is site i; bit value 0 is |0>,
/// the +1 eigenstate of sigma^z.
class StateVector {
 public:
  /// Throws std::domain_error unless amplitudes.size() == 2^sites and the
  /// Euclidean norm equals 1 within 1e-9.
  StateVector(int sites, std::vector<Amplitude> amplitudes);

  static StateVector basis_state(int sites, std::uint64_t index);

  int sites() const noexcept { return sites_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

  /// Skips the norm check; used for intermediate integrator states.
  static StateVector unchecked(int sites, std::vector<Amplitude> amplitudes);

 private:
  StateVector() = default;

  int sites_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// Translationally invariant product state (sqrt(p)|0> + sqrt(1-p)|1>)^{(x)M}.
struct ProductStateSpec {
  double p = 1.0;

  /// Single-site (<X>, <Y>, <Z>) = (2 sqrt(p(1-p)), 0, 2p - 1).
  std::array<double, 3> bloch() const;
  friend bool operator==(const ProductStateSpec&, const ProductStateSpec&) = default;
};

/// Throws std::domain_error for p outside [0, 1].
StateVector build_initial_state(const ProductStateSpec& spec, int sites);

}  // namespace spinlearn::qdyn

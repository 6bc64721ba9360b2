#include "spinlearn/qdyn/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace spinlearn::qdyn {

namespace {

inline double zsign(std::uint64_t s, std::uint64_t mask) { return (s & mask) ? -1.0 : 1.0; }

}  // namespace

Hamiltonian::Hamiltonian(const SpinModel& model) : model_(model) {
  model_.validate();
  const int M = model_.sites;
  const std::size_t dim = std::size_t{1} << M;
  for (int i = 0; i < M; ++i) {
    site_masks_.push_back(std::uint64_t{1} << i);
    const int j = (i + 1) % M;
    bond_masks_.push_back((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
  }

  const double zz = model_.kind == ModelKind::kHeisenberg ? model_.Jz : model_.J;
  const double field = model_.kind == ModelKind::kTfiLongitudinal ? model_.g : 0.0;
  diagonal_.assign(dim, 0.0);
  for (std::size_t s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int i = 0; i < M; ++i) {
      const int j = (i + 1) % M;
      e += zz * zsign(s, site_masks_[i]) * zsign(s, site_masks_[j]);
      e += field * zsign(s, site_masks_[i]);
    }
    diagonal_[s] = e;
  }
}

void Hamiltonian::apply(double drive, std::span<const Amplitude> in, std::span<Amplitude> out) const {
  const std::size_t dim = diagonal_.size();
  if (in.size() != dim || out.size() != dim) {
    throw std::domain_error("Hamiltonian::apply: dimension mismatch");
  }
  for (std::size_t s = 0; s < dim; ++s) out[s] = diagonal_[s] * in[s];

  if (model_.kind == ModelKind::kHeisenberg) {
    // X_i X_j and Y_i Y_j both flip the bond; Y Y contributes -1 for equal
    // bits and +1 for opposite bits.
    const double jx = drive;
    const double jy = model_.Jy;
    for (const std::uint64_t mask : bond_masks_) {
      if (std::popcount(mask) != 2) {
        // Single-site ring: X_0 X_0 = Y_0 Y_0 = I.
        for (std::size_t s = 0; s < dim; ++s) out[s] += (jx + jy) * in[s];
        continue;
      }
      for (std::size_t s = 0; s < dim; ++s) {
        const std::uint64_t bits = s & mask;
        const bool differ = bits != 0 && bits != mask;
        out[s] += (jx + (differ ? jy : -jy)) * in[s ^ mask];
      }
    }
    return;
  }

  if (drive == 0.0) return;
  for (const std::uint64_t mask : site_masks_) {
    for (std::size_t s = 0; s < dim; ++s) out[s] += drive * in[s ^ mask];
  }
}

double energy_expectation(const StateVector& state, const SpinModel& model, double drive_value) {
  if (state.sites() != model.sites) {
    throw std::domain_error("energy_expectation: state has " + std::to_string(state.sites()) +
                            " sites, model has " + std::to_string(model.sites));
  }
  const Hamiltonian h(model);
  std::vector<Amplitude> hpsi(state.dimension());
  h.apply(drive_value, state.amplitudes(), hpsi);
  Amplitude e = 0.0;
  const auto psi = state.amplitudes();
  for (std::size_t s = 0; s < psi.size(); ++s) e += std::conj(psi[s]) * hpsi[s];
  if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
    throw std::domain_error("energy expectation has imaginary residue " + std::to_string(e.imag()));
  }
  return e.real();
}

}  // namespace spinlearn::qdyn

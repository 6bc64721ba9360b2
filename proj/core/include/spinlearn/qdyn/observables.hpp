#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::qdyn {

enum class Pauli : std::uint8_t { kX = 0, kY = 1, kZ = 2 };

struct PauliFactor {
  int site;
  Pauli axis;
};

/// <psi| prod_k sigma^{axis_k}_{site_k} |psi>, factors applied right to left.
/// Factors may repeat a site; the product is taken in the given order.
std::complex<double> pauli_expectation(const StateVector& state, std::span<const PauliFactor> factors);

/// Longest correlator distance on a ring of `sites` spins.
constexpr int default_max_distance(int sites) { return sites / 2; }

/// Number of scalar observables in a frame: 3 locals + 9 per distance.
constexpr std::size_t observable_count(int max_distance) {
  return 3 + 9 * static_cast<std::size_t>(max_distance);
}

/// Column names for the flat layout: X, Y, Z, then XX1, XY1, ..., ZZL.
std::vector<std::string> observable_names(int max_distance);

/// Site-averaged expectation values at one instant.
///
/// Flat layout (used by datasets and networks): <X>, <Y>, <Z>, then for
/// l = 1..L the nine pairs <s^a_j s^b_{j+l}> with index 3a + b, a, b in
/// {x, y, z}.
struct ObservableFrame {
  std::array<double, 3> locals{};
  std::vector<double> correlators;

  int max_distance() const noexcept { return static_cast<int>(correlators.size() / 9); }
  double local(Pauli a) const { return locals[static_cast<int>(a)]; }
  double correlator(int distance, Pauli a, Pauli b) const;
  double& correlator(int distance, Pauli a, Pauli b);

  std::vector<double> flatten() const;
  static ObservableFrame from_flat(std::span<const double> flat);

  friend bool operator==(const ObservableFrame&, const ObservableFrame&) = default;
};

/// Frames on the uniform grid t_k = k * dt, k = 0..size()-1.
struct ObservableSeries {
  double dt = 0.0;
  std::vector<ObservableFrame> frames;

  std::size_t size() const noexcept { return frames.size(); }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
  int max_distance() const { return frames.empty() ? 0 : frames.front().max_distance(); }

  /// Row-major (frames x observables).
  std::vector<double> flatten() const;
  static ObservableSeries from_flat(std::span<const double> flat, std::size_t n_frames, double dt);

  friend bool operator==(const ObservableSeries&, const ObservableSeries&) = default;
};

/// Site-averaged locals and correlators up to `max_distance`.
/// Throws std::domain_error unless 0 <= max_distance <= floor(M/2).
ObservableFrame measure(const StateVector& state, int max_distance);

/// Per-site values without averaging, for translational-invariance checks.
struct SiteResolvedFrame {
  std::vector<std::array<double, 3>> locals;     // [site][axis]
  std::vector<std::vector<double>> correlators;  // [site][9*(l-1) + 3a + b]
  double max_imaginary_residue = 0.0;
};

SiteResolvedFrame measure_sites(const StateVector& state, int max_distance);

/// Frame of a product state, where every correlator factorizes.
ObservableFrame product_frame(const ProductStateSpec& spec, int max_distance);

}  // namespace spinlearn::qdyn

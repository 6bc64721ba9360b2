#include "spinlearn/qdyn/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spinlearn/qdyn/spin_model.hpp"

namespace spinlearn::qdyn {

namespace {

void check_sites(int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw std::domain_error("site count out of range: " + std::to_string(sites));
  }
}

}  // namespace

StateVector::StateVector(int sites, std::vector<Amplitude> amplitudes) {
  check_sites(sites);
  if (amplitudes.size() != (std::size_t{1} << sites)) {
    throw std::domain_error("state dimension " + std::to_string(amplitudes.size()) +
                            " does not match 2^" + std::to_string(sites));
  }
  sites_ = sites;
  amplitudes_ = std::move(amplitudes);
  const double n = norm();
  if (std::abs(n - 1.0) > 1e-9) {
    throw std::domain_error("state vector is not normalized (norm " + std::to_string(n) + ")");
  }
}

StateVector StateVector::unchecked(int sites, std::vector<Amplitude> amplitudes) {
  StateVector s;
  s.sites_ = sites;
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

StateVector StateVector::basis_state(int sites, std::uint64_t index) {
  check_sites(sites);
  std::vector<Amplitude> amps(std::size_t{1} << sites);
  if (index >= amps.size()) throw std::domain_error("basis index out of range");
  amps[index] = 1.0;
  return StateVector(sites, std::move(amps));
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

std::array<double, 3> ProductStateSpec::bloch() const {
  return {2.0 * std::sqrt(p * (1.0 - p)), 0.0, 2.0 * p - 1.0};
}

StateVector build_initial_state(const ProductStateSpec& spec, int sites) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::domain_error("product-state weight p must lie in [0, 1], got " + std::to_string(spec.p));
  }
  check_sites(sites);
  const double up = std::sqrt(spec.p);
  const double down = std::sqrt(1.0 - spec.p);
  const std::size_t dim = std::size_t{1} << sites;
  std::vector<Amplitude> amps(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const int ones = std::popcount(s);
    amps[s] = std::pow(up, sites - ones) * std::pow(down, ones);
  }
  return StateVector(sites, std::move(amps));
}

}  // namespace spinlearn::qdyn

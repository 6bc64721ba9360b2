#include "spinlearn/qdyn/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace spinlearn::qdyn {

double subsystem_entropy(const StateVector& state, int subsystem_sites) {
  const int M = state.sites();
  if (subsystem_sites < 0 || subsystem_sites > M) throw std::domain_error("subsystem size out of range");
  const Eigen::Index rows = Eigen::Index{1} << subsystem_sites;
  const Eigen::Index cols = Eigen::Index{1} << (M - subsystem_sites);
  // Column-major: psi[a + b * 2^k] with a the subsystem's bits.
  const Eigen::Map<const Eigen::MatrixXcd> psi(state.amplitudes().data(), rows, cols);
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("reduced density matrix diagonalization failed");

  double s = 0.0;
  for (const double lambda : solver.eigenvalues()) {
    if (lambda > 1e-12) s -= lambda * std::log(lambda);
  }
  return s;
}

double half_chain_entropy(const StateVector& state) {
  if (state.sites() < 2) throw std::domain_error("half-chain entropy requires at least 2 sites");
  return subsystem_entropy(state, state.sites() / 2);
}

}  // namespace spinlearn::qdyn

#pragma once

#include "spinlearn/qdyn/state.hpp"

namespace spinlearn::qdyn {

/// Von Neumann entropy (natural log) of the reduced state of sites
/// 0..subsystem_sites-1. Eigenvalues below 1e-12 are skipped.
double subsystem_entropy(const StateVector& state, int subsystem_sites);

/// Entropy of the first floor(M/2) sites. Requires M >= 2.
double half_chain_entropy(const StateVector& state);

}  // namespace spinlearn::qdyn

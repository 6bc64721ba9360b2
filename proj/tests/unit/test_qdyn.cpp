#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dense_oracle.hpp"
#include "spinlearn/drives/gaussian.hpp"
#include "spinlearn/errors.hpp"
#include "spinlearn/qdyn/entropy.hpp"
#include "spinlearn/qdyn/evolve.hpp"
#include "spinlearn/qdyn/hamiltonian.hpp"
#include "spinlearn/qdyn/observables.hpp"
#include "spinlearn/rng.hpp"

using namespace spinlearn;
using namespace spinlearn::qdyn;
using cd = std::complex<double>;

namespace {

StateVector random_state(int sites, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Amplitude> a(std::size_t{1} << sites);
  double norm = 0.0;
  for (auto& v : a) {
    v = {rng.normal(), rng.normal()};
    norm += std::norm(v);
  }
  for (auto& v : a) v /= std::sqrt(norm);
  return StateVector(sites, a);
}

StateVector ghz(int sites) {
  std::vector<Amplitude> a(std::size_t{1} << sites, 0.0);
  a.front() = a.back() = 1.0 / std::sqrt(2.0);
  return StateVector(sites, a);
}

drives::DriveTrajectory gp_drive(std::uint64_t seed, std::size_t n = 57) {
  drives::GpConfig cfg;
  cfg.seed = seed;
  cfg.n = n;
  return drives::sample_gaussian_drive(cfg);
}

double max_abs_diff(const ObservableSeries& a, const ObservableSeries& b) {
  const auto fa = a.flatten(), fb = b.flatten();
  EXPECT_EQ(fa.size(), fb.size());
  double m = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) m = std::max(m, std::abs(fa[i] - fb[i]));
  return m;
}

}  // namespace

// ---- build_initial_state ----

TEST(InitialState, AllUpIsBasisStateZero) {
  const auto s = build_initial_state({1.0}, 3);
  ASSERT_EQ(s.dimension(), 8u);
  EXPECT_DOUBLE_EQ(s[0].real(), 1.0);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(s[i], cd(0.0));
}

TEST(InitialState, AllDownIsLastBasisState) {
  const auto s = build_initial_state({0.0}, 2);
  EXPECT_DOUBLE_EQ(s[3].real(), 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s[i], cd(0.0));
}

TEST(InitialState, HalfIsXEigenstate) {
  const auto s = build_initial_state({0.5}, 1);
  EXPECT_NEAR(s[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[1].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(measure(s, 0).locals[0], 1.0, 1e-14);
}

TEST(InitialState, RejectsOutOfRangeP) {
  EXPECT_THROW(build_initial_state({-0.01}, 2), std::domain_error);
  EXPECT_THROW(build_initial_state({1.01}, 2), std::domain_error);
}

TEST(InitialState, TensorPowerAndBlochVector) {
  for (double p : {0.0, 0.1, 0.3, 0.5, 0.77, 1.0}) {
    const auto s = build_initial_state({p}, 4);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      const int ones = std::popcount(i);
      const double expected = std::pow(std::sqrt(p), 4 - ones) * std::pow(std::sqrt(1 - p), ones);
      EXPECT_NEAR(s[i].real(), expected, 1e-14);
    }
    const auto frame = measure(s, 2);
    const auto bloch = ProductStateSpec{p}.bloch();
    EXPECT_NEAR(frame.locals[0], 2 * std::sqrt(p * (1 - p)), 1e-12);
    EXPECT_NEAR(frame.locals[1], 0.0, 1e-12);
    EXPECT_NEAR(frame.locals[2], 2 * p - 1, 1e-12);
    for (int a = 0; a < 3; ++a) EXPECT_NEAR(frame.locals[a], bloch[a], 1e-12);
  }
}

TEST(StateVector, RejectsBadNormAndDimension) {
  EXPECT_THROW(StateVector(2, std::vector<Amplitude>(3, 0.5)), std::domain_error);
  EXPECT_THROW(StateVector(1, std::vector<Amplitude>{1.0, 1.0}), std::domain_error);
}

// ---- measure ----

TEST(Measure, AllUpProductState) {
  const auto f = measure(build_initial_state({1.0}, 4), 2);
  EXPECT_NEAR(f.locals[0], 0.0, 1e-15);
  EXPECT_NEAR(f.locals[1], 0.0, 1e-15);
  EXPECT_NEAR(f.locals[2], 1.0, 1e-15);
  for (int l = 1; l <= 2; ++l) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double expected = (a == 2 && b == 2) ? 1.0 : 0.0;
        EXPECT_NEAR(f.correlator(l, Pauli(a), Pauli(b)), expected, 1e-15);
      }
    }
  }
}

TEST(Measure, UniformSuperposition) {
  const auto f = measure(build_initial_state({0.5}, 3), 1);
  EXPECT_NEAR(f.locals[0], 1.0, 1e-14);
  EXPECT_NEAR(f.correlator(1, Pauli::kX, Pauli::kX), 1.0, 1e-14);
}

TEST(Measure, GhzThreeSites) {
  const auto f = measure(ghz(3), 1);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(f.locals[a], 0.0, 1e-15);
  EXPECT_NEAR(f.correlator(1, Pauli::kZ, Pauli::kZ), 1.0, 1e-15);
  EXPECT_NEAR(f.correlator(1, Pauli::kX, Pauli::kX), 0.0, 1e-15);
}

TEST(Measure, RejectsDistanceBeyondHalfRing) {
  const auto s = build_initial_state({1.0}, 4);
  EXPECT_THROW(measure(s, 3), std::domain_error);
  EXPECT_THROW(measure(s, -1), std::domain_error);
}

TEST(Measure, FlatLayoutRoundTrip) {
  const auto f = measure(random_state(5, 3), 2);
  const auto flat = f.flatten();
  ASSERT_EQ(flat.size(), observable_count(2));
  EXPECT_EQ(flat[3 + 9 * 1 + 3 * 0 + 2], f.correlator(2, Pauli::kX, Pauli::kZ));
  EXPECT_EQ(ObservableFrame::from_flat(flat), f);
}

TEST(Measure, ProductStatesFactorize) {
  for (double p : {0.0, 0.2, 0.5, 0.9}) {
    for (int M : {2, 3, 5, 6}) {
      const int L = M / 2;
      const auto f = measure(build_initial_state({p}, M), L);
      const auto ref = product_frame({p}, L);
      for (int l = 1; l <= L; ++l) {
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            EXPECT_NEAR(f.correlator(l, Pauli(a), Pauli(b)), f.locals[a] * f.locals[b], 1e-9);
          }
        }
      }
      const auto fa = f.flatten(), fr = ref.flatten();
      for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_NEAR(fa[i], fr[i], 1e-12);
    }
  }
}

TEST(Measure, MatchesDenseOracleOnRandomState) {
  const int M = 5;
  const auto s = random_state(M, 11);
  const auto psi = oracle::to_vec(s);
  const auto f = measure(s, 2);
  for (int a = 0; a < 3; ++a) {
    double avg = 0.0;
    for (int j = 0; j < M; ++j) avg += oracle::expectation(oracle::pauli_string(M, {{j, a}}), psi) / M;
    EXPECT_NEAR(f.locals[a], avg, 1e-12);
  }
  for (int l = 1; l <= 2; ++l) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double avg = 0.0;
        for (int j = 0; j < M; ++j) {
          avg += oracle::expectation(oracle::pauli_string(M, {{j, a}, {(j + l) % M, b}}), psi) / M;
        }
        EXPECT_NEAR(f.correlator(l, Pauli(a), Pauli(b)), avg, 1e-12);
      }
    }
  }
}

TEST(Measure, EntriesBounded) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (double v : measure(random_state(6, seed), 3).flatten()) {
      EXPECT_LE(std::abs(v), 1.0 + 1e-12);
    }
  }
}

TEST(PauliExpectation, RepeatedSiteProducts) {
  const auto s = random_state(3, 5);
  // X Y = i Z on one site.
  const PauliFactor xy[] = {{1, Pauli::kX}, {1, Pauli::kY}};
  const PauliFactor z[] = {{1, Pauli::kZ}};
  const cd lhs = pauli_expectation(s, xy);
  const cd rhs = cd(0, 1) * pauli_expectation(s, z);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
}

// ---- entropy ----

TEST(Entropy, ProductStateIsZero) {
  for (double p : {0.0, 0.3, 0.5, 1.0}) {
    EXPECT_NEAR(half_chain_entropy(build_initial_state({p}, 6)), 0.0, 1e-9);
  }
}

TEST(Entropy, GhzFourSitesIsLn2) {
  EXPECT_NEAR(half_chain_entropy(ghz(4)), std::numbers::ln2, 1e-12);
}

TEST(Entropy, BoundedByMaximallyMixed) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_state(7, seed);
    for (int k = 1; k <= 3; ++k) {
      const double e = subsystem_entropy(s, k);
      EXPECT_GE(e, -1e-12);
      EXPECT_LE(e, k * std::numbers::ln2 + 1e-12);
    }
  }
}

TEST(Entropy, MaximallyEntangledPairsReachBound) {
  // Bell pairs between site j and j + 2 on a 4-ring: first two sites are maximally mixed.
  std::vector<Amplitude> a(16, 0.0);
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int b1 = 0; b1 < 2; ++b1) a[b0 | (b1 << 1) | (b0 << 2) | (b1 << 3)] = 0.5;
  }
  EXPECT_NEAR(half_chain_entropy(StateVector(4, a)), 2 * std::numbers::ln2, 1e-12);
}

TEST(Entropy, RequiresTwoSites) {
  EXPECT_THROW(half_chain_entropy(build_initial_state({0.5}, 1)), std::domain_error);
}

// ---- Hamiltonian / energy ----

TEST(Energy, TwoRingAllUp) {
  EXPECT_NEAR(energy_expectation(build_initial_state({1.0}, 2), SpinModel::tfi(2), 0.0), 2.0, 1e-14);
}

TEST(Energy, ThreeRingTransverseFieldVanishes) {
  EXPECT_NEAR(energy_expectation(build_initial_state({1.0}, 3), SpinModel::tfi(3), 5.0), 3.0, 1e-14);
}

TEST(Energy, ZeroOperator) {
  const auto s = random_state(4, 2);
  EXPECT_NEAR(energy_expectation(s, SpinModel::tfi(4, 0.0), 0.0), 0.0, 1e-15);
  EXPECT_NEAR(energy_expectation(s, SpinModel::heisenberg(4, 0.0, 0.0), 0.0), 0.0, 1e-15);
}

TEST(Energy, DimensionMismatch) {
  EXPECT_THROW(energy_expectation(build_initial_state({1.0}, 3), SpinModel::tfi(4), 0.0), std::domain_error);
}

TEST(Hamiltonian, MatchesDenseOracle) {
  const std::vector<SpinModel> models = {SpinModel::tfi(4, 0.7), SpinModel::tfi_longitudinal(5, 0.4, 1.1),
                                         SpinModel::heisenberg(4, 0.6, -1.3), SpinModel::tfi(2),
                                         SpinModel::heisenberg(2), SpinModel::tfi(1)};
  for (const auto& model : models) {
    const Hamiltonian h(model);
    const auto s = random_state(model.sites, 9);
    std::vector<Amplitude> out(s.dimension());
    h.apply(1.37, s.amplitudes(), out);
    const oracle::Vec ref = oracle::hamiltonian(model, 1.37) * oracle::to_vec(s);
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_NEAR(std::abs(out[i] - ref[static_cast<Eigen::Index>(i)]), 0.0, 1e-12)
          << to_string(model.kind) << " M=" << model.sites;
    }
  }
}

// ---- evolve ----

TEST(Evolve, EigenstateStaysPut) {
  IntegratorConfig cfg;
  cfg.t_max = 3.0;
  const auto series = evolve(build_initial_state({1.0}, 4), SpinModel::tfi(4), drives::constant_drive(0.0, 25, 0.125), cfg);
  ASSERT_EQ(series.size(), 25u);
  for (const auto& f : series.frames) {
    // Deviations here are pure norm loss, bounded by the norm envelope.
    EXPECT_NEAR(f.locals[2], 1.0, 10 * cfg.atol);
    EXPECT_NEAR(f.correlator(1, Pauli::kZ, Pauli::kZ), 1.0, 10 * cfg.atol);
  }
}

TEST(Evolve, SingleSpinPrecession) {
  IntegratorConfig cfg;
  cfg.t_max = 7.0;
  const auto series =
      evolve(build_initial_state({1.0}, 1), SpinModel::tfi(1), drives::constant_drive(1.0, 57, 0.125), cfg);
  ASSERT_EQ(series.size(), 57u);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double t = series.time(k);
    EXPECT_NEAR(series.frames[k].locals[2], std::cos(2 * t), 1e-7);
    EXPECT_NEAR(series.frames[k].locals[1], -std::sin(2 * t), 1e-7);
    EXPECT_NEAR(series.frames[k].locals[0], 0.0, 1e-7);
  }
}

TEST(Evolve, MatchesTightToleranceReference) {
  const auto drive = gp_drive(2024);
  const auto init = build_initial_state({0.3}, 5);
  const auto model = SpinModel::tfi(5);
  IntegratorConfig ref_cfg;
  ref_cfg.atol = ref_cfg.rtol = 1e-12;
  const auto ref = evolve(init, model, drive, ref_cfg);
  const auto run = evolve(init, model, drive, IntegratorConfig{});
  EXPECT_LT(max_abs_diff(run, ref), 1e-6);
}

TEST(Evolve, ConstantDriveMatchesDensePropagator) {
  const std::vector<SpinModel> models = {SpinModel::tfi(4), SpinModel::tfi_longitudinal(4, 0.5),
                                         SpinModel::heisenberg(4, 0.8, 1.2)};
  for (const auto& model : models) {
    IntegratorConfig cfg;
    cfg.t_max = 2.0;
    const auto init = build_initial_state({0.3}, 4);
    const double drive = 0.9;
    std::vector<oracle::Vec> states;
    EvolveOptions opts;
    opts.observer = [&](std::size_t, double, const StateVector& s) { states.push_back(oracle::to_vec(s)); };
    evolve(init, model, drives::constant_drive(drive, 17, 0.125), cfg, opts);
    const oracle::Mat h = oracle::hamiltonian(model, drive);
    for (std::size_t k = 0; k < states.size(); ++k) {
      const oracle::Vec exact = oracle::propagate(h, oracle::to_vec(init), 0.125 * static_cast<double>(k));
      EXPECT_LT((states[k] - exact).norm(), 1e-7) << to_string(model.kind) << " k=" << k;
    }
  }
}

TEST(Evolve, NormConserved) {
  IntegratorConfig cfg;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    EvolveOptions opts;
    opts.observer = [&](std::size_t, double, const StateVector& s) {
      EXPECT_LT(std::abs(s.norm() - 1.0), 10 * cfg.atol);
    };
    evolve(build_initial_state({0.1 + 0.2 * seed}, 6), SpinModel::tfi(6), gp_drive(seed), cfg, opts);
  }
}

TEST(Evolve, RawIntegratorNormDriftIsSmall) {
  IntegratorConfig cfg;
  cfg.renormalize = false;
  EvolveOptions opts;
  double worst = 0.0;
  opts.observer = [&](std::size_t, double, const StateVector& s) { worst = std::max(worst, std::abs(s.norm() - 1.0)); };
  evolve(build_initial_state({0.3}, 6), SpinModel::tfi(6), gp_drive(2), cfg, opts);
  EXPECT_LT(worst, 100 * cfg.atol);
  EXPECT_GT(worst, 0.0);
}

TEST(Evolve, EnergyConservedAfterQuench) {
  IntegratorConfig cfg;
  std::vector<double> values(57, 0.4);
  for (std::size_t k = 20; k < 57; ++k) values[k] = -1.3;
  const drives::DriveTrajectory drive{values, 0.125, 0.0};
  const auto model = SpinModel::tfi_longitudinal(6, 0.3);
  std::vector<double> energies;
  EvolveOptions opts;
  opts.observer = [&](std::size_t k, double, const StateVector& s) {
    if (k >= 20) energies.push_back(energy_expectation(s, model, -1.3));
  };
  evolve(build_initial_state({0.6}, 6), model, drive, cfg, opts);
  ASSERT_EQ(energies.size(), 37u);
  for (double e : energies) EXPECT_NEAR(e, energies.front(), 100 * cfg.atol);
}

TEST(Evolve, TranslationInvariancePreserved) {
  IntegratorConfig cfg;
  cfg.t_max = 4.0;
  EvolveOptions opts;
  opts.observer = [&](std::size_t, double, const StateVector& s) {
    const auto sites = measure_sites(s, 3);
    EXPECT_LT(sites.max_imaginary_residue, 1e-10);
    for (std::size_t j = 1; j < sites.locals.size(); ++j) {
      for (int a = 0; a < 3; ++a) EXPECT_NEAR(sites.locals[j][a], sites.locals[0][a], 1e-8);
      for (std::size_t c = 0; c < sites.correlators[0].size(); ++c) {
        EXPECT_NEAR(sites.correlators[j][c], sites.correlators[0][c], 1e-8);
      }
    }
  };
  evolve(build_initial_state({0.25}, 6), SpinModel::tfi(6), gp_drive(77), cfg, opts);
}

TEST(Evolve, HalvingMaxStepStaysInEnvelope) {
  IntegratorConfig a;
  a.max_step = 0.05;
  IntegratorConfig b = a;
  b.max_step = 0.025;
  const auto drive = gp_drive(5);
  const auto init = build_initial_state({0.4}, 5);
  const double diff = max_abs_diff(evolve(init, SpinModel::tfi(5), drive, a), evolve(init, SpinModel::tfi(5), drive, b));
  EXPECT_LT(diff, 1e-6);
}

TEST(Evolve, DimensionMismatch) {
  EXPECT_THROW(evolve(build_initial_state({1.0}, 3), SpinModel::tfi(4), gp_drive(1), IntegratorConfig{}),
               std::domain_error);
}

TEST(Evolve, DriveMustCoverWindow) {
  EXPECT_THROW(evolve(build_initial_state({1.0}, 3), SpinModel::tfi(3), gp_drive(1, 40), IntegratorConfig{}),
               std::domain_error);
}

TEST(Evolve, IntegrationFailureCarriesTime) {
  IntegratorConfig cfg;
  cfg.max_steps = 30;
  try {
    evolve(build_initial_state({0.5}, 4), SpinModel::tfi(4), gp_drive(3), cfg);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.time_reached(), 0.0);
    EXPECT_LT(e.time_reached(), 7.0);
  }
}

TEST(Evolve, ObservableCountFollowsMaxDistance) {
  IntegratorConfig cfg;
  cfg.t_max = 1.0;
  EvolveOptions opts;
  opts.max_distance = 1;
  const auto s = evolve(build_initial_state({0.5}, 6), SpinModel::tfi(6), gp_drive(3), cfg, opts);
  EXPECT_EQ(s.frames[0].flatten().size(), 12u);
  const auto d = evolve(build_initial_state({0.5}, 6), SpinModel::tfi(6), gp_drive(3), cfg);
  EXPECT_EQ(d.frames[0].flatten().size(), 30u);
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.sample_count(), 57u);
  cfg.t_max = 14.0;
  EXPECT_EQ(cfg.sample_count(), 113u);
  cfg.atol = 0.0;
  EXPECT_THROW(cfg.validate(), std::domain_error);
  const auto relaxed = IntegratorConfig::relaxed(0.125, 7.0);
  EXPECT_EQ(relaxed.atol, 1e-5);
  EXPECT_EQ(relaxed.rtol, 1e-3);
}

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "spinlearn/closure/moment_equations.hpp"
#include "spinlearn/drives/gaussian.hpp"
#include "spinlearn/neural/surrogate.hpp"
#include "spinlearn/qdyn/evolve.hpp"
#include "spinlearn/qdyn/hamiltonian.hpp"
#include "spinlearn/rng.hpp"

using namespace spinlearn;

namespace {

drives::DriveTrajectory gp_drive(std::size_t n, std::uint64_t seed) {
  drives::GpConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return drives::sample_gaussian_drive(cfg);
}

void BM_HamiltonianApply(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const qdyn::Hamiltonian h(qdyn::SpinModel::tfi(sites));
  const auto psi = qdyn::build_initial_state({0.3}, sites);
  std::vector<qdyn::Amplitude> out(psi.dimension());
  for (auto _ : state) {
    h.apply(0.7, psi.amplitudes(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(psi.dimension()));
}
BENCHMARK(BM_HamiltonianApply)->DenseRange(6, 14, 2);

// Exact evolution to t = 14 at the relaxed tolerances of the runtime comparison.
void BM_ExactEvolveRelaxed(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const auto model = qdyn::SpinModel::tfi(sites);
  const auto drive = gp_drive(113, 5);
  const auto cfg = qdyn::IntegratorConfig::relaxed(0.125, 14.0);
  const auto psi = qdyn::build_initial_state({0.3}, sites);
  for (auto _ : state) benchmark::DoNotOptimize(qdyn::evolve(psi, model, drive, cfg));
}
BENCHMARK(BM_ExactEvolveRelaxed)->DenseRange(6, 10, 1)->Unit(benchmark::kMillisecond);

// One LSTM evaluation over 112 steps (batch of one).
void BM_LstmPredict(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const std::size_t n_obs = qdyn::observable_count(qdyn::default_max_distance(sites));
  const neural::Surrogate net({neural::ArchitectureSpec::defaults(neural::Architecture::kLstm), n_obs, 112, 0.125}, 1);
  const auto drive = gp_drive(113, 5);
  const auto init = qdyn::ObservableFrame::from_flat(std::vector<double>(n_obs, 0.0));
  for (auto _ : state) benchmark::DoNotOptimize(net.predict(drive, init, 112));
}
BENCHMARK(BM_LstmPredict)->DenseRange(6, 10, 1)->Unit(benchmark::kMillisecond);

void BM_LstmTrainStep(benchmark::State& state) {
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  const neural::Surrogate net({neural::ArchitectureSpec::defaults(neural::Architecture::kLstm), 30, 57, 0.125}, 1);
  neural::ExampleSet set;
  set.n_frames = 57;
  set.n_obs = 30;
  set.dt = 0.125;
  Rng rng(2);
  for (std::size_t i = 0; i < batch; ++i) {
    neural::Example e;
    for (std::size_t k = 0; k < 57; ++k) e.drive.push_back(rng.normal());
    for (std::size_t k = 0; k < 57 * 30; ++k) e.series.push_back(rng.uniform(-1, 1));
    set.examples.push_back(std::move(e));
  }
  std::vector<std::size_t> idx(batch);
  for (std::size_t i = 0; i < batch; ++i) idx[i] = i;
  const auto b = net.make_batch(set, idx);
  auto grad = net.params();
  for (auto _ : state) benchmark::DoNotOptimize(net.loss_and_gradient(b, grad));
}
BENCHMARK(BM_LstmTrainStep)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ClosureRhs(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const closure::MomentEquations eq(sites);
  std::vector<double> y(eq.size(), 0.1), dy(eq.size());
  for (auto _ : state) {
    eq.rhs(0.5, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_ClosureRhs)->Arg(7)->Arg(15);

}  // namespace
BENCHMARK_MAIN();

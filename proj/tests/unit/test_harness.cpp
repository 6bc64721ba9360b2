#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "spinlearn/datasets/generate.hpp"
#include "spinlearn/datasets/load.hpp"
#include "spinlearn/errors.hpp"
#include "spinlearn/harness/bench.hpp"
#include "spinlearn/harness/evaluate.hpp"
#include "spinlearn/harness/pipeline.hpp"
#include "spinlearn/harness/report.hpp"
#include "spinlearn/harness/svg.hpp"
#include "spinlearn/qdyn/entropy.hpp"

using namespace spinlearn;
using namespace spinlearn::harness;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("spinlearn_h_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

Experiment tiny_experiment(qdyn::SpinModel model) {
  Experiment e;
  e.dataset.model = model;
  e.dataset.n_samples = 20;
  e.dataset.root_seed = 5;
  e.dataset.integrator.t_max = 2.0;
  e.dataset.gp.n = 17;
  e.architecture = {neural::Architecture::kLstm, neural::Strategy::kFullEvolution, {16}};
  e.train.batch_size = 4;
  e.train.epochs = 2;
  e.train.learning_rate = 1e-2;
  e.train.seed = 3;
  return e;
}

EvalConfig tiny_eval() {
  EvalConfig cfg;
  cfg.per_class = 6;
  cfg.t_max = 3.0;
  cfg.drives = drives::EvalDriveConfig::for_window(2.0);
  cfg.seed = 11;
  return cfg;
}

Workspace workspace(const fs::path& root) {
  Workspace ws;
  ws.root = root;
  return ws;
}

std::vector<qdyn::ObservableSeries> truths(const EvalSuite& s) {
  std::vector<qdyn::ObservableSeries> out;
  for (const auto& x : s.samples) out.push_back(x.series);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- metrics

TEST(Metrics, IdenticalPredictionGivesZeroError) {
  const auto model = qdyn::SpinModel::tfi(4);
  const auto cfg = tiny_eval();
  std::vector<EvalSuite> suites;
  for (auto kind : cfg.classes) suites.push_back(build_suite(model, 2, cfg, kind));
  Predictions fed;
  for (const auto& s : suites) fed.push_back(truths(s));
  const neural::Surrogate zero({neural::ArchitectureSpec{neural::Architecture::kLstm, neural::Strategy::kFullEvolution, {8}},
                                21, 17, 0.125},
                               1);
  const auto report = evaluate_predictions(fed, suites, zero, 2.0);
  for (const auto& c : report.classes) {
    ASSERT_EQ(c.network.rmse.size(), 25u);
    for (double v : c.network.rmse) EXPECT_EQ(v, 0.0);
    for (double v : c.network.per_observable) EXPECT_EQ(v, 0.0);
  }
}

TEST(Metrics, ZeroParameterNetworkErrorIsTheTargetRms) {
  const auto model = qdyn::SpinModel::tfi(4);
  const auto cfg = tiny_eval();
  const auto suite = build_suite(model, 2, cfg, DriveClass::kGaussian);
  const neural::SurrogateShape shape{{neural::Architecture::kLstm, neural::Strategy::kFullEvolution, {8, 8}}, 21, 17,
                                     0.125};
  neural::Surrogate net(shape, 9);
  net.params().set_zero();
  const auto preds = predict_suites(net, std::span(&suite, 1));
  const auto c = error_curves(preds[0], truths(suite));
  // Zero weights and biases: every output is head.b = 0, so the error is the
  // root mean square of the targets.
  for (std::size_t k = 0; k < c.rmse.size(); ++k) {
    double sum = 0.0;
    for (const auto& s : suite.samples) {
      for (double v : s.series.frames[k].flatten()) sum += v * v;
    }
    EXPECT_NEAR(c.rmse[k], std::sqrt(sum / (6.0 * 21.0)), 1e-14);
  }
  const auto direct = zero_prediction_rmse(truths(suite));
  for (std::size_t k = 0; k < c.rmse.size(); ++k) EXPECT_NEAR(c.rmse[k], direct[k], 1e-15);
}

TEST(Metrics, TruncatedPredictionsDropOut) {
  const auto model = qdyn::SpinModel::tfi(3);
  auto cfg = tiny_eval();
  cfg.per_class = 2;
  const auto suite = build_suite(model, 1, cfg, DriveClass::kPeriodic);
  auto pred = truths(suite);
  pred[1].frames.resize(5);
  for (auto& f : pred[0].frames) f.locals[0] += 0.5;
  const auto c = error_curves(pred, truths(suite));
  EXPECT_EQ(c.count[4], 2u);
  EXPECT_EQ(c.count[5], 1u);
  EXPECT_NEAR(c.rmse[10], std::sqrt(0.25 / 12.0), 1e-15);
  EXPECT_NEAR(c.rmse[2], std::sqrt(0.25 / 24.0), 1e-15);
}

TEST(Metrics, WindowsAndFit) {
  ErrorCurves c;
  c.t = {0, 1, 2, 3};
  c.rmse = {1, 2, 3, 10};
  EXPECT_DOUBLE_EQ(window_mean(c, 0, 2), 2.0);
  EXPECT_DOUBLE_EQ(window_max(c, 1, 3), 10.0);
  const std::vector<double> x{1, 2, 3}, y{3, 5, 7};
  const auto [a, b] = linear_fit(x, y);
  EXPECT_NEAR(a, 1.0, 1e-12);
  EXPECT_NEAR(b, 2.0, 1e-12);
}

// ---------------------------------------------------------------- suites

TEST(Suites, DeterministicAndCached) {
  TempDir dir("suites");
  auto ws = workspace(dir.path);
  const auto model = qdyn::SpinModel::tfi(4);
  auto cfg = tiny_eval();
  const auto a = ensure_suites(ws, model, 2, cfg);
  const auto b = ensure_suites(ws, model, 2, cfg);
  ws.workers = 4;
  const auto c = build_suite(model, 2, cfg, DriveClass::kQuench, 4);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i].samples, b[i].samples);
  EXPECT_EQ(a[2].samples, c.samples);
  // Different classes and a different seed give different drives.
  EXPECT_NE(a[0].samples[0].drive, a[1].samples[0].drive);
  cfg.seed = 12;
  EXPECT_NE(build_suite(model, 2, cfg, DriveClass::kGaussian).samples[0].drive, a[0].samples[0].drive);
}

TEST(Suites, InitialStateOption) {
  const auto model = qdyn::SpinModel::tfi(3);
  auto cfg = tiny_eval();
  cfg.periodic_init = InitMode::kZ;
  const auto z = build_suite(model, 1, cfg, DriveClass::kPeriodic);
  for (const auto& s : z.samples) EXPECT_EQ(s.init.p, 1.0);
  const auto r = build_suite(model, 1, cfg, DriveClass::kQuench);
  EXPECT_NE(r.samples[0].init.p, r.samples[1].init.p);
}

TEST(Suites, EvaluationSeedIsNotTheDatasetSeed) {
  EXPECT_NE(eval_root_seed(0), 0u);
  EXPECT_NE(eval_root_seed(1), eval_root_seed(0));
}

// ---------------------------------------------------------------- physics hooks

TEST(Physics, LongitudinalFieldZeroReproducesIsingBitIdentically) {
  TempDir dir("g0");
  datasets::DatasetConfig a;
  a.model = qdyn::SpinModel::tfi(5);
  a.n_samples = 6;
  a.root_seed = 8;
  a.integrator.t_max = 2.0;
  a.gp.n = 17;
  auto b = a;
  b.model = qdyn::SpinModel::tfi_longitudinal(5, 0.0);
  datasets::generate_dataset(a, dir.path / "tfi", {});
  datasets::generate_dataset(b, dir.path / "g0", {});
  for (const char* f : {"train.bin", "val.bin", "test.bin"}) {
    EXPECT_EQ(slurp(dir.path / "tfi" / f), slurp(dir.path / "g0" / f)) << f;
  }
  auto cfg = tiny_eval();
  cfg.entropy = true;
  const auto sa = build_suite(a.model, 2, cfg, DriveClass::kQuench);
  const auto sb = build_suite(b.model, 2, cfg, DriveClass::kQuench);
  EXPECT_EQ(sa.samples, sb.samples);
  EXPECT_EQ(sa.entropy, sb.entropy);
}

TEST(Physics, HeisenbergAllUpIsStationaryAtUnitCoupling) {
  const auto model = qdyn::SpinModel::heisenberg(6);
  qdyn::IntegratorConfig integ;
  integ.t_max = 5.0;
  const auto series = qdyn::evolve(qdyn::build_initial_state({1.0}, 6), model, drives::constant_drive(1.0, 41, 0.125),
                                   integ);
  for (const auto& f : series.frames) {
    EXPECT_NEAR(f.locals[2], 1.0, 1e-12);
    EXPECT_NEAR(f.correlator(1, qdyn::Pauli::kZ, qdyn::Pauli::kZ), 1.0, 1e-12);
  }
}

TEST(Physics, EntropyStartsAtZeroAndGrowsUnderGaussianDrives) {
  const auto model = qdyn::SpinModel::tfi(7);
  EvalConfig cfg;
  cfg.per_class = 20;
  cfg.t_max = 7.0;
  cfg.entropy = true;
  const auto suite = build_suite(model, 3, cfg, DriveClass::kGaussian);
  ASSERT_EQ(suite.entropy.size(), 20u);
  std::vector<double> mean(suite.entropy[0].size(), 0.0);
  for (const auto& e : suite.entropy) {
    EXPECT_NEAR(e[0], 0.0, 1e-10);
    for (std::size_t k = 0; k < e.size(); ++k) mean[k] += e[k] / 20.0;
  }
  EXPECT_GT(*std::max_element(mean.begin(), mean.end()), 0.5);
}

TEST(Closure, ExactAtFirstFrameAndOrderingReported) {
  const auto model = qdyn::SpinModel::tfi(5);
  auto cfg = tiny_eval();
  cfg.closure = true;
  std::vector<EvalSuite> suites{build_suite(model, 2, cfg, DriveClass::kGaussian)};
  const neural::SurrogateShape shape{{neural::Architecture::kLstm, neural::Strategy::kFullEvolution, {8}}, 21, 17,
                                     0.125};
  const neural::Surrogate net(shape, 2);
  const auto out = evaluate_model(net, model, suites, cfg, 2.0);
  const auto& c = out.report.classes[0];
  ASSERT_TRUE(c.has_closure);
  EXPECT_LT(c.closure.rmse[0], 1e-4);
  EXPECT_GE(c.closure_ordering, 0.0);
  EXPECT_LE(c.closure_ordering, 1.0);
  cfg.closure = true;
  EXPECT_THROW(evaluate_model(net, qdyn::SpinModel::heisenberg(5), suites, cfg, 2.0), ConfigError);
}

TEST(Closure, ProductEigenstateGivesZeroErrors) {
  // B = 0 with all spins up: the exact, closure and a network whose output
  // bias is the stationary frame all agree exactly.
  const auto model = qdyn::SpinModel::tfi(4);
  EvalSuite suite;
  suite.kind = DriveClass::kQuench;
  qdyn::IntegratorConfig integ;
  integ.t_max = 3.0;
  for (int i = 0; i < 3; ++i) {
    datasets::Sample s;
    s.id = static_cast<std::uint64_t>(i);
    s.init.p = 1.0;
    s.drive = drives::constant_drive(0.0, 25, 0.125);
    s.series = qdyn::evolve(qdyn::build_initial_state(s.init, 4), model, s.drive, integ);
    suite.samples.push_back(s);
  }
  const neural::SurrogateShape shape{{neural::Architecture::kLstm, neural::Strategy::kFullEvolution, {8}}, 21, 17,
                                     0.125};
  neural::Surrogate net(shape, 4);
  net.params().set_zero();
  const auto frame = suite.samples[0].series.frames[0].flatten();
  auto bias = net.params().tensor(net.params().index_of("head.b"));
  for (std::size_t j = 0; j < frame.size(); ++j) bias(static_cast<Eigen::Index>(j), 0) = static_cast<float>(frame[j]);
  EvalConfig cfg;
  cfg.closure = true;
  cfg.t_max = 3.0;
  const auto out = evaluate_model(net, model, std::span(&suite, 1), cfg, 2.0);
  const auto& c = out.report.classes[0];
  // Zero up to the rounding of the exact phase evolution.
  for (std::size_t k = 0; k < c.network.rmse.size(); ++k) {
    EXPECT_LT(c.network.rmse[k], 1e-15);
    EXPECT_LT(c.closure.rmse[k], 1e-15);
  }
  EXPECT_EQ(c.closure_breakdowns, 0u);
}

// ---------------------------------------------------------------- training pipeline

TEST(Pipeline, MemorizesDuplicatedSamples) {
  TempDir dir("memorize");
  auto ws = workspace(dir.path);
  datasets::DatasetConfig d;
  d.model = qdyn::SpinModel::tfi(3);
  d.n_samples = 12;  // 10 train, 1 validation, 1 test
  d.integrator.t_max = 2.0;
  d.gp.n = 17;
  d.constant_drive = 0.8;
  d.p_range = {0.3, 0.3};
  const auto ds = ensure_dataset(ws, d);
  const auto train = datasets::load_split(ds, datasets::Split::kTrain);
  ASSERT_EQ(train.size(), 10u);
  for (const auto& s : train) EXPECT_EQ(s.series, train[0].series);

  TrainCommand cmd;
  cmd.dataset_dir = ds;
  cmd.architecture = {neural::Architecture::kLstm, neural::Strategy::kFullEvolution, {32}};
  cmd.train.batch_size = 1;
  cmd.train.epochs = 150;
  cmd.train.learning_rate = 4e-3;
  cmd.train.lr_decay = 0.98;
  cmd.checkpoint = dir.path / "mem.ckpt";
  const auto out = run_train(ws, cmd);
  EXPECT_LT(out.checkpoint.info.state.history.train.back(), 1e-5);
  const auto rows = read_csv(out.loss_csv);
  ASSERT_EQ(rows.size(), 151u);
  EXPECT_EQ(rows[0][0], "epoch");
  EXPECT_EQ(std::stod(rows.back()[1]), out.checkpoint.info.state.history.train.back());
}

TEST(Pipeline, ResumeContinuesWithIdenticalNextEpoch) {
  TempDir dir("resume");
  auto ws = workspace(dir.path);
  auto e = tiny_experiment(qdyn::SpinModel::tfi(4));
  const auto ds = ensure_dataset(ws, e.dataset);
  TrainCommand cmd;
  cmd.dataset_dir = ds;
  cmd.architecture = e.architecture;
  cmd.train = e.train;
  cmd.train.epochs = 4;
  cmd.checkpoint = dir.path / "full.ckpt";
  const auto full = run_train(ws, cmd);
  EXPECT_EQ(full.epochs_run, 4u);

  // A finished shorter run of the same job is extended.
  cmd.checkpoint = dir.path / "part.ckpt";
  cmd.train.epochs = 3;
  run_train(ws, cmd);
  cmd.train.epochs = 4;
  const auto extended = run_train(ws, cmd);
  EXPECT_EQ(extended.epochs_run, 1u);
  EXPECT_EQ(extended.checkpoint.info.state.history.train, full.checkpoint.info.state.history.train);
  cmd.train.epochs = 2;
  EXPECT_THROW(run_train(ws, cmd), ConfigError);
  cmd.train.epochs = 4;

  // Interrupted run: a checkpoint after 2 of 4 epochs resumes to the same bytes.
  fs::remove(cmd.checkpoint);
  Workspace interrupting = ws;
  std::size_t seen = 0;
  interrupting.log = [&](const std::string& line) {
    if (line.rfind("epoch ", 0) == 0 && ++seen == 2) throw std::runtime_error("interrupt");
  };
  EXPECT_THROW(run_train(interrupting, cmd), std::runtime_error);
  EXPECT_EQ(neural::load_checkpoint(cmd.checkpoint).info.state.epoch, 2u);
  const auto resumed = run_train(ws, cmd);
  EXPECT_EQ(resumed.epochs_run, 2u);
  EXPECT_EQ(resumed.checkpoint.info.state.history.train[2], full.checkpoint.info.state.history.train[2]);
  EXPECT_EQ(slurp(cmd.checkpoint), slurp(dir.path / "full.ckpt"));
  EXPECT_EQ(slurp(resumed.loss_csv), slurp(full.loss_csv));

  // Complete checkpoints are returned without training.
  EXPECT_EQ(run_train(ws, cmd).epochs_run, 0u);
}

TEST(Pipeline, RefusesCheckpointOfAnotherDataset) {
  TempDir dir("fingerprint");
  auto ws = workspace(dir.path);
  auto e = tiny_experiment(qdyn::SpinModel::tfi(3));
  const auto ds1 = ensure_dataset(ws, e.dataset);
  e.dataset.root_seed = 6;
  const auto ds2 = ensure_dataset(ws, e.dataset);
  ASSERT_NE(ds1, ds2);
  TrainCommand cmd;
  cmd.dataset_dir = ds1;
  cmd.architecture = e.architecture;
  cmd.train = e.train;
  cmd.checkpoint = dir.path / "a.ckpt";
  run_train(ws, cmd);
  cmd.dataset_dir = ds2;
  try {
    run_train(ws, cmd);
    FAIL();
  } catch (const ConfigError& err) {
    EXPECT_NE(std::string(err.what()).find("fingerprint"), std::string::npos) << err.what();
  }
  auto forced = ws;
  forced.force = true;
  EXPECT_THROW(run_train(forced, cmd), ConfigError);
}

TEST(Pipeline, DatasetAndModelAreCachedByContent) {
  TempDir dir("cache");
  auto ws = workspace(dir.path);
  const auto e = tiny_experiment(qdyn::SpinModel::tfi(3));
  const auto a = ensure_model(ws, e);
  const auto b = ensure_model(ws, e);
  EXPECT_EQ(a.path, b.path);
  EXPECT_EQ(a.epochs_run, 2u);
  EXPECT_EQ(b.epochs_run, 0u);
  auto e2 = e;
  e2.train.learning_rate = 5e-3;
  EXPECT_NE(ensure_model(ws, e2).path, a.path);
  EXPECT_EQ(datasets::read_manifest(ensure_dataset(ws, e.dataset)).fingerprint(), a.checkpoint.info.dataset_fingerprint);
}

// ---------------------------------------------------------------- reports

TEST(Report, CurvesMatchRecomputationFromRawDumps) {
  TempDir dir("dump");
  auto ws = workspace(dir.path / "work");
  EvalCommand cmd;
  cmd.model.experiment = tiny_experiment(qdyn::SpinModel::tfi(4));
  cmd.eval = tiny_eval();
  cmd.eval.dump_predictions = true;
  cmd.output = dir.path / "report";
  const auto report = run_eval(ws, cmd);
  for (const auto& cls : {"gp", "periodic", "quench"}) {
    const auto dump = read_csv(cmd.output / (std::string("predictions_") + cls + ".csv"));
    const auto curve = read_csv(cmd.output / (std::string("rmse_") + cls + ".csv"));
    const std::size_t n_obs = (dump[0].size() - 3) / 2;
    ASSERT_EQ(n_obs, 21u);
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (std::size_t r = 1; r < dump.size(); ++r) {
      const std::size_t k = std::stoul(dump[r][1]);
      for (std::size_t j = 0; j < n_obs; ++j) {
        const double d = std::stod(dump[r][3 + j]) - std::stod(dump[r][3 + n_obs + j]);
        acc[k].first += d * d;
      }
      acc[k].second += n_obs;
    }
    ASSERT_EQ(curve.size(), acc.size() + 1);
    for (std::size_t r = 1; r < curve.size(); ++r) {
      const auto& [sum, n] = acc[r - 1];
      EXPECT_NEAR(std::stod(curve[r][2]), std::sqrt(sum / static_cast<double>(n)), 1e-12) << cls << " frame " << r;
    }
  }
  EXPECT_EQ(report.train_t_max, 2.0);
  EXPECT_EQ(report.eval_t_max, 3.0);
}

TEST(Report, ArtifactsAreReproducibleAndMarkTheTrainingWindow) {
  TempDir dir("repro");
  const auto run = [&](const fs::path& root) {
    auto ws = workspace(root / "work");
    EvalCommand cmd;
    cmd.model.experiment = tiny_experiment(qdyn::SpinModel::tfi(4));
    cmd.eval = tiny_eval();
    cmd.eval.closure = true;
    cmd.output = root / "report";
    run_eval(ws, cmd);
    return cmd.output;
  };
  const auto a = run(dir.path / "a");
  const auto b = run(dir.path / "b");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "timing.txt") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
    ++files;
  }
  EXPECT_EQ(files, 2u + 3u * 2u);
  // Marker at t = 2 on a [0, 3] axis inside the 480-pixel plot area starting at x = 70.
  const std::string svg = slurp(a / "rmse_gp.svg");
  EXPECT_NE(svg.find("training window"), std::string::npos);
  EXPECT_NE(svg.find("x1=\"390.0\""), std::string::npos);
  const auto summary = read_csv(a / "summary.csv");
  ASSERT_EQ(summary.size(), 4u);
  EXPECT_EQ(summary[0][8], "closure_ordering");
}

TEST(Report, SvgBreaksLinesAtNonFiniteValues) {
  LineChart c;
  c.series.push_back({"a", {0, 1, 2, 3}, {1, 2, std::numeric_limits<double>::infinity(), 1}, false});
  const std::string svg = render_svg(c);
  const std::size_t begin = svg.find("<path d=\"") + 9;
  const std::string d = svg.substr(begin, svg.find('"', begin) - begin);
  EXPECT_EQ(std::count(d.begin(), d.end(), 'M'), 2);
  EXPECT_EQ(std::count(d.begin(), d.end(), 'L'), 1);
  EXPECT_EQ(svg, render_svg(c));
}

// ---------------------------------------------------------------- sweeps and bench

TEST(Experiments, SweepAndHeisenbergSmoke) {
  TempDir dir("sweep");
  auto ws = workspace(dir.path / "work");
  SweepCommand sweep;
  sweep.experiment = tiny_experiment(qdyn::SpinModel::tfi(4));
  sweep.g_values = {0.0, 1.0};
  sweep.eval = tiny_eval();
  sweep.eval.classes = {DriveClass::kQuench};
  sweep.output = dir.path / "sweep";
  const auto r = run_sweep_g(ws, sweep);
  ASSERT_EQ(r.reports.size(), 2u);
  const auto entropy = read_csv(sweep.output / "entropy.csv");
  ASSERT_EQ(entropy[0].size(), 3u);
  EXPECT_NEAR(std::stod(entropy[1][1]), 0.0, 1e-10);
  EXPECT_NEAR(std::stod(entropy[1][2]), 0.0, 1e-10);
  EXPECT_TRUE(fs::exists(sweep.output / "g_1" / "rmse_quench.csv"));
  EXPECT_TRUE(fs::exists(sweep.output / "g_0" / "entropy.svg"));

  HeisenbergCommand heis;
  heis.experiment = tiny_experiment(qdyn::SpinModel::heisenberg(4));
  heis.eval = tiny_eval();
  heis.eval.classes = {DriveClass::kGaussian, DriveClass::kQuench};
  heis.output = dir.path / "heis";
  const auto h = run_heisenberg(ws, heis);
  EXPECT_TRUE(std::isfinite(h.in_window_mean(DriveClass::kGaussian)));
  heis.experiment.dataset.model = qdyn::SpinModel::tfi(4);
  EXPECT_THROW(run_heisenberg(ws, heis), ConfigError);
}

TEST(Bench, SmallTableAndNetworkBound) {
  TempDir dir("bench");
  BenchConfig cfg;
  cfg.sites = {4, 5, 7};
  cfg.instances = 3;
  cfg.output = dir.path / "bench.csv";
  const auto r = run_bench(cfg, {});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.network_steps, 112u);
  for (const auto& row : r.rows) {
    EXPECT_GT(row.exact_seconds, 0.0);
    EXPECT_GT(row.network_seconds, 0.0);
    EXPECT_GT(row.exact_steps, 0.0);
  }
  EXPECT_LT(r.at(7).network_seconds, 0.05);
  EXPECT_EQ(read_csv(cfg.output).size(), 4u);
}

// ---------------------------------------------------------------- config

TEST(Config, ErrorsNameTheField) {
  const auto expect_field = [](const char* text, const char* field) {
    try {
      nlohmann::json::parse(text).get<EvalCommand>();
      FAIL() << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  expect_field(R"({"eval": {"classes": ["gp", "sawtooth"]}})", "eval.classes");
  expect_field(R"({"eval": {"per_clas": 3}})", "eval.per_clas");
  expect_field(R"({"eval": {"periodic_init": "x"}})", "eval.periodic_init");
  expect_field(R"({"model": {"experiment": {"train_samples": -1}}})", "experiment.train_samples");
  ModelSource none;
  EXPECT_THROW(none.validate(), ConfigError);
  auto e = tiny_experiment(qdyn::SpinModel::tfi(3));
  e.train_samples = 17;
  EXPECT_THROW(e.validate(), ConfigError);
  EvalConfig bad;
  bad.integrator.dt_sample = 0.2;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, RoundTrip) {
  EvalConfig cfg = tiny_eval();
  cfg.classes = {DriveClass::kQuench};
  cfg.quench_init = InitMode::kZ;
  const auto back = nlohmann::json(cfg).get<EvalConfig>();
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(cfg));
  const auto e = tiny_experiment(qdyn::SpinModel::heisenberg(4));
  EXPECT_EQ(nlohmann::json(nlohmann::json(e).get<Experiment>()), nlohmann::json(e));
  const auto fcnn = nlohmann::json::parse(R"({"architecture": {"arch": "fcnn", "strategy": "stepwise"}})").get<Experiment>();
  EXPECT_EQ(fcnn.architecture.hidden, neural::ArchitectureSpec::defaults(neural::Architecture::kFcnn).hidden);
}

#include "spinlearn/harness/evaluate.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "parallel.hpp"
#include "spinlearn/closure/integrate.hpp"
#include "spinlearn/datasets/sha256.hpp"
#include "spinlearn/harness/report.hpp"
#include "spinlearn/qdyn/entropy.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::harness {

std::uint64_t eval_root_seed(std::uint64_t seed) {
  const std::string h = datasets::sha256_hex("spinlearn-eval:" + std::to_string(seed));
  return std::stoull(h.substr(0, 16), nullptr, 16);
}

namespace {

InitMode init_mode(const EvalConfig& cfg, DriveClass kind) {
  switch (kind) {
    case DriveClass::kGaussian: return cfg.gp_init;
    case DriveClass::kPeriodic: return cfg.periodic_init;
    case DriveClass::kQuench: return cfg.quench_init;
  }
  return InitMode::kRandom;
}

constexpr int kMaxAttempts = 8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

EvalSuite build_suite(const qdyn::SpinModel& model, int max_distance, const EvalConfig& cfg, DriveClass kind,
                      unsigned workers) {
  cfg.validate();
  const auto integrator = cfg.reference_integrator();
  const std::size_t n_points = cfg.drive_points();
  const std::uint64_t root = eval_root_seed(cfg.seed);
  const InitMode init = init_mode(cfg, kind);

  EvalSuite suite;
  suite.kind = kind;
  suite.samples.resize(cfg.per_class);
  if (cfg.entropy) suite.entropy.resize(cfg.per_class);

  detail::parallel_for(cfg.per_class, workers, [&](std::size_t i) {
    const std::uint64_t stream = (static_cast<std::uint64_t>(kind) << 32) | i;
    for (int attempt = 0;; ++attempt) {
      try {
        Rng rng = Rng::child(root, stream, static_cast<std::uint64_t>(attempt));
        datasets::Sample s;
        s.id = i;
        s.attempt = static_cast<std::uint64_t>(attempt);
        s.init.p = init == InitMode::kRandom ? rng.uniform() : 1.0;
        switch (kind) {
          case DriveClass::kGaussian: {
            auto gp = cfg.gp;
            gp.n = n_points;
            auto d = drives::draw_gaussian_drive(gp, rng);
            s.c0 = d.c0;
            s.sigma = d.sigma;
            s.drive = std::move(d.drive);
            break;
          }
          case DriveClass::kPeriodic:
            s.drive = drives::draw_periodic_drive(cfg.drives, n_points, cfg.gp.dt, rng).drive;
            break;
          case DriveClass::kQuench:
            s.drive = drives::draw_quench_drive(cfg.drives, n_points, cfg.gp.dt, rng).drive;
            break;
        }
        std::vector<double> entropy;
        qdyn::EvolveOptions opts;
        opts.max_distance = max_distance;
        if (cfg.entropy) {
          entropy.resize(integrator.sample_count());
          opts.observer = [&](std::size_t k, double, const qdyn::StateVector& psi) {
            entropy[k] = qdyn::half_chain_entropy(psi);
          };
        }
        s.series = qdyn::evolve(qdyn::build_initial_state(s.init, model.sites), model, s.drive, integrator, opts);
        suite.samples[i] = std::move(s);
        if (cfg.entropy) suite.entropy[i] = std::move(entropy);
        return;
      } catch (const NumericError& e) {
        if (attempt + 1 >= kMaxAttempts) {
          throw NumericError(fmt::format("{} evaluation sample {} failed {} times: {}", to_string(kind), i,
                                         kMaxAttempts, e.what()));
        }
      }
    }
  });
  return suite;
}

namespace {

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<EvalSuite> ensure_suites(const Workspace& ws, const qdyn::SpinModel& model, int max_distance,
                                     const EvalConfig& cfg) {
  cfg.validate();
  nlohmann::json key = cfg;
  key.erase("classes");
  key.erase("closure");
  key.erase("dump_predictions");
  key["model"] = model;
  key["max_distance"] = max_distance;
  const auto dir = ws.root / "suites" / content_hash(key).substr(0, 16);
  std::vector<EvalSuite> suites;
  for (DriveClass kind : cfg.classes) {
    const auto bin = dir / (std::string(to_string(kind)) + ".bin");
    const auto ent = dir / (std::string(to_string(kind)) + ".entropy.json");
    if (std::filesystem::exists(bin) && (!cfg.entropy || std::filesystem::exists(ent))) {
      try {
        EvalSuite s;
        s.kind = kind;
        s.samples = datasets::parse_samples(read_all(bin), bin.string());
        if (cfg.entropy) s.entropy = nlohmann::json::parse(read_all(ent)).get<std::vector<std::vector<double>>>();
        if (s.samples.size() == cfg.per_class) {
          ws.note(fmt::format("{} suite {} (cached)", to_string(kind), bin.string()));
          suites.push_back(std::move(s));
          continue;
        }
      } catch (const std::exception& e) {
        ws.note(std::string("rebuilding suite: ") + e.what());
      }
    }
    ws.note(fmt::format("building {} suite: {} samples at M={} to t={}", to_string(kind), cfg.per_class, model.sites,
                        cfg.t_max));
    auto s = build_suite(model, max_distance, cfg, kind, ws.workers);
    if (cfg.entropy) write_file_atomic(ent, nlohmann::json(s.entropy).dump());
    write_file_atomic(bin, datasets::serialize_samples(s.samples));
    suites.push_back(std::move(s));
  }
  return suites;
}

const ClassReport& EvalReport::at(DriveClass kind) const {
  for (const auto& c : classes) {
    if (c.kind == kind) return c;
  }
  throw std::out_of_range(fmt::format("report has no {} class", to_string(kind)));
}

double EvalReport::in_window_mean(DriveClass kind) const { return window_mean(at(kind).network, 0.0, train_t_max); }

double EvalReport::extrapolation_mean(DriveClass kind) const {
  return window_mean(at(kind).network, train_t_max, eval_t_max);
}

Predictions predict_suites(const neural::Surrogate& model, std::span<const EvalSuite> suites) {
  constexpr std::size_t kChunk = 250;
  const auto& shape = model.shape();
  const bool fixed_length =
      shape.arch.arch == neural::Architecture::kFcnn && shape.arch.strategy == neural::Strategy::kFullEvolution;
  Predictions out;
  for (const auto& suite : suites) {
    auto& preds = out.emplace_back();
    if (suite.samples.empty()) continue;
    const std::size_t full = suite.samples.front().series.size();
    // The fixed-length network only covers its training window.
    const std::size_t n_frames = fixed_length ? std::min(full, shape.n_frames) : full;
    for (std::size_t lo = 0; lo < suite.samples.size(); lo += kChunk) {
      const std::size_t hi = std::min(suite.samples.size(), lo + kChunk);
      std::vector<std::vector<double>> drives;
      std::vector<qdyn::ObservableFrame> inits;
      for (std::size_t i = lo; i < hi; ++i) {
        const auto& s = suite.samples[i];
        drives.push_back(neural::resample_drive(s.drive, s.series.dt, n_frames));
        inits.push_back(s.series.frames.front());
      }
      for (auto& p : model.predict(drives, inits, n_frames)) preds.push_back(std::move(p));
    }
  }
  return out;
}

EvalReport evaluate_predictions(const Predictions& predictions, std::span<const EvalSuite> suites,
                                const neural::Surrogate& zero_model, double train_t_max,
                                const qdyn::SpinModel* closure_model, const qdyn::IntegratorConfig* closure_integrator,
                                unsigned workers) {
  if (predictions.size() != suites.size()) throw std::invalid_argument("evaluate_predictions: suite count mismatch");
  EvalReport report;
  report.train_t_max = train_t_max;
  if (!suites.empty() && !suites.front().samples.empty()) {
    const auto& s = suites.front().samples.front().series;
    report.eval_t_max = s.time(s.size() - 1);
    report.observables = qdyn::observable_names(s.max_distance());
  }
  const Predictions zero = predict_suites(zero_model, suites);
  for (std::size_t si = 0; si < suites.size(); ++si) {
    const auto& suite = suites[si];
    std::vector<qdyn::ObservableSeries> truth;
    truth.reserve(suite.samples.size());
    for (const auto& s : suite.samples) truth.push_back(s.series);

    ClassReport c;
    c.kind = suite.kind;
    c.samples = suite.samples.size();
    c.network = error_curves(predictions[si], truth);
    c.zero_baseline = error_curves(zero[si], truth).rmse;

    if (closure_model) {
      if (!closure_integrator) throw std::invalid_argument("evaluate_predictions: closure needs an integrator");
      const auto t0 = Clock::now();
      std::vector<qdyn::ObservableSeries> moments(truth.size());
      std::vector<char> broke(truth.size(), 0);
      detail::parallel_for(truth.size(), workers, [&](std::size_t i) {
        auto r = closure::integrate_closure(suite.samples[i].init, suite.samples[i].drive, *closure_model,
                                            *closure_integrator);
        moments[i] = std::move(r.series);
        broke[i] = r.breakdown;
      });
      c.has_closure = true;
      c.closure = error_curves(moments, truth);
      for (char b : broke) c.closure_breakdowns += static_cast<std::size_t>(b);
      std::size_t frames = 0, wins = 0;
      for (std::size_t k = 0; k < c.network.t.size(); ++k) {
        if (c.network.t[k] <= 0.0) continue;
        ++frames;
        wins += c.network.rmse[k] < c.closure.rmse[k];
      }
      c.closure_ordering = frames ? static_cast<double>(wins) / static_cast<double>(frames) : 0.0;
      report.timing.emplace_back(fmt::format("closure_{}", to_string(suite.kind)), seconds_since(t0));
    }

    if (!suite.entropy.empty()) {
      c.entropy_mean.assign(suite.entropy.front().size(), 0.0);
      for (const auto& e : suite.entropy) {
        for (std::size_t k = 0; k < e.size(); ++k) c.entropy_mean[k] += e[k];
      }
      for (auto& v : c.entropy_mean) v /= static_cast<double>(suite.entropy.size());
    }
    report.classes.push_back(std::move(c));
  }
  return report;
}

EvalOutput evaluate_model(const neural::Surrogate& model, const qdyn::SpinModel& spin_model,
                          std::span<const EvalSuite> suites, const EvalConfig& cfg, double train_t_max,
                          unsigned workers) {
  if (std::abs(model.shape().dt - cfg.integrator.dt_sample) > 1e-12) {
    throw ConfigError(fmt::format("eval.integrator.dt_sample: {} differs from the model grid {}",
                                  cfg.integrator.dt_sample, model.shape().dt));
  }
  if (cfg.closure && spin_model.kind != qdyn::ModelKind::kTfi) {
    throw ConfigError("eval.closure: the closure baseline exists only for the tfi model");
  }
  EvalOutput out;
  auto t0 = Clock::now();
  out.predictions = predict_suites(model, suites);
  const double predict_s = seconds_since(t0);

  auto zero_params = model.params();
  zero_params.set_zero();
  const neural::Surrogate zero_model(model.shape(), std::move(zero_params));
  const auto integrator = cfg.reference_integrator();
  out.report = evaluate_predictions(out.predictions, suites, zero_model, train_t_max, cfg.closure ? &spin_model : nullptr,
                                    &integrator, workers);
  out.report.timing.insert(out.report.timing.begin(), {"network_predict", predict_s});
  return out;
}

EvalReport run_eval(const Workspace& ws, const EvalCommand& cmd) {
  cmd.model.validate();
  cmd.eval.validate();
  const auto outcome = resolve_model(ws, cmd.model);
  const auto& ckpt = outcome.checkpoint;
  const auto dcfg = checkpoint_dataset_config(ckpt);
  const auto suites = ensure_suites(ws, dcfg.model, dcfg.resolved_max_distance(), cmd.eval);
  auto out = evaluate_model(ckpt.model, dcfg.model, suites, cmd.eval, dcfg.integrator.t_max, ws.workers);
  out.report.label = fmt::format("{} {} M={} ({})", neural::to_string(ckpt.model.shape().arch.arch),
                                 neural::to_string(ckpt.model.shape().arch.strategy), dcfg.model.sites,
                                 qdyn::to_string(dcfg.model.kind));
  if (!cmd.output.empty()) {
    write_report(out.report, cmd.output);
    if (cmd.eval.dump_predictions) write_prediction_dump(out.predictions, suites, cmd.output);
    ws.note("report written to " + cmd.output.string());
  }
  return out.report;
}

}  // namespace spinlearn::harness

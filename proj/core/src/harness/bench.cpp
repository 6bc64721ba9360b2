#include "spinlearn/harness/bench.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "spinlearn/harness/report.hpp"
#include "spinlearn/harness/svg.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::harness {

const BenchRow& BenchResult::at(int sites) const {
  for (const auto& r : rows) {
    if (r.sites == sites) return r;
  }
  throw std::out_of_range(fmt::format("bench has no row for M={}", sites));
}

BenchResult run_bench(const BenchConfig& cfg, const Workspace& ws) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  BenchResult result;
  result.network_steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
  auto integrator = qdyn::IntegratorConfig::relaxed(cfg.dt, cfg.t_max);
  integrator.atol = cfg.atol;
  integrator.rtol = cfg.rtol;
  drives::GpConfig gp;
  gp.dt = cfg.dt;
  gp.n = result.network_steps + 1;

  for (int sites : cfg.sites) {
    const auto model = qdyn::SpinModel::tfi(sites);
    const int L = qdyn::default_max_distance(sites);
    std::vector<qdyn::ProductStateSpec> inits(cfg.instances);
    std::vector<drives::DriveTrajectory> drives(cfg.instances);
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      Rng rng = Rng::child(cfg.seed, static_cast<std::uint64_t>(sites), i);
      inits[i].p = rng.uniform();
      drives[i] = drives::draw_gaussian_drive(gp, rng).drive;
    }

    BenchRow row;
    row.sites = sites;
    row.instances = cfg.instances;
    double exact = 0.0, steps = 0.0;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      qdyn::StepperStats stats;
      qdyn::EvolveOptions opts;
      opts.stats = &stats;
      const auto t0 = Clock::now();
      const auto psi = qdyn::build_initial_state(inits[i], sites);
      const auto series = qdyn::evolve(psi, model, drives[i], integrator, opts);
      exact += std::chrono::duration<double>(Clock::now() - t0).count();
      steps += static_cast<double>(stats.accepted);
      if (series.size() == 0) throw NumericError("empty evolution");
    }
    row.exact_seconds = exact / static_cast<double>(cfg.instances);
    row.exact_steps = steps / static_cast<double>(cfg.instances);

    const neural::SurrogateShape shape{cfg.architecture, qdyn::observable_count(L), result.network_steps, cfg.dt};
    const neural::Surrogate net(shape, cfg.seed);
    const qdyn::ObservableFrame init_frame = qdyn::ObservableFrame::from_flat(
        std::vector<double>(qdyn::observable_count(L), 0.0));
    double network = 0.0;
    double checksum = 0.0;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      const auto t0 = Clock::now();
      const auto out = net.predict(drives[i], init_frame, result.network_steps);
      network += std::chrono::duration<double>(Clock::now() - t0).count();
      checksum += out.frames.back().locals[2];
    }
    row.network_seconds = network / static_cast<double>(cfg.instances);
    if (!std::isfinite(checksum)) throw NumericError("non-finite network output in bench");
    ws.note(fmt::format("bench M={}: exact {:.3g} s ({:.0f} steps), network {:.3g} s", sites, row.exact_seconds,
                        row.exact_steps, row.network_seconds));
    result.rows.push_back(row);
  }

  if (result.rows.size() >= 2) {
    std::vector<double> m, log_m, log_exact, log_net;
    for (const auto& r : result.rows) {
      m.push_back(r.sites);
      log_m.push_back(std::log(static_cast<double>(r.sites)));
      log_exact.push_back(std::log(r.exact_seconds));
      log_net.push_back(std::log(r.network_seconds));
    }
    result.exact_rate = linear_fit(m, log_exact).second;
    result.network_exponent = linear_fit(log_m, log_net).second;
  }
  if (!cfg.output.empty()) write_file_atomic(cfg.output, bench_csv(result));
  return result;
}

std::string bench_csv(const BenchResult& r) {
  std::string out = "sites,instances,exact_seconds,network_seconds,exact_steps\n";
  for (const auto& row : r.rows) {
    out += fmt::format("{},{},{:.6e},{:.6e},{:.1f}\n", row.sites, row.instances, row.exact_seconds,
                       row.network_seconds, row.exact_steps);
  }
  out += fmt::format("# exact: t ~ exp({:.4f} M) (x{:.3f} per site)\n", r.exact_rate, std::exp(r.exact_rate));
  out += fmt::format("# network: t ~ M^{:.4f}\n", r.network_exponent);
  out += fmt::format("# network steps per evaluation: {}; untrained parameters\n", r.network_steps);
  return out;
}

namespace {

std::string g_label(double g) { return fmt::format("g_{}", g); }

}  // namespace

SweepResult run_sweep_g(const Workspace& ws, const SweepCommand& cmd) {
  cmd.validate();
  SweepResult result;
  std::string sweep = "g,class,in_window_mean,extrapolation_mean\n";
  std::string entropy;
  std::vector<std::vector<double>> entropy_cols;
  std::vector<double> t;
  LineChart chart;
  chart.title = "half-chain entropy, random drives";
  chart.x_label = "Jt";
  chart.y_label = "S(t)";
  for (double g : cmd.g_values) {
    Experiment e = cmd.experiment;
    e.dataset.model = qdyn::SpinModel::tfi_longitudinal(cmd.experiment.dataset.model.sites, g,
                                                        cmd.experiment.dataset.model.J);
    ws.note(fmt::format("sweep: g = {}", g));
    const auto outcome = ensure_model(ws, e);
    auto eval = cmd.eval;
    eval.entropy = true;
    eval.closure = false;
    const auto suites = ensure_suites(ws, e.dataset.model, e.dataset.resolved_max_distance(), eval);
    auto out = evaluate_model(outcome.checkpoint.model, e.dataset.model, suites, eval, e.dataset.integrator.t_max,
                              ws.workers);
    out.report.label = fmt::format("g={}", g);
    if (!cmd.output.empty()) {
      write_report(out.report, cmd.output / g_label(g));
      if (eval.dump_predictions) write_prediction_dump(out.predictions, suites, cmd.output / g_label(g));
    }
    for (const auto& c : out.report.classes) {
      const bool extrapolates = out.report.eval_t_max > out.report.train_t_max + 1e-9;
      sweep += fmt::format("{},{},{},{}\n", g, to_string(c.kind), out.report.in_window_mean(c.kind),
                           extrapolates ? out.report.extrapolation_mean(c.kind) : std::nan(""));
    }
    // Entropy averaged over the random drives of every class.
    std::vector<double> mean;
    std::size_t n = 0;
    for (const auto& s : suites) {
      for (const auto& e_i : s.entropy) {
        if (mean.empty()) mean.assign(e_i.size(), 0.0);
        for (std::size_t k = 0; k < e_i.size(); ++k) mean[k] += e_i[k];
        ++n;
      }
    }
    for (auto& v : mean) v /= static_cast<double>(std::max<std::size_t>(n, 1));
    if (t.empty() && !suites.empty()) t = out.report.classes.front().network.t;
    entropy_cols.push_back(mean);
    chart.series.push_back({fmt::format("g={}", g), t, mean, false});
    chart.marker_x = out.report.train_t_max;
    result.g_values.push_back(g);
    result.reports.push_back(std::move(out.report));
  }
  if (!cmd.output.empty()) {
    entropy = "t";
    for (double g : result.g_values) entropy += fmt::format(",g={}", g);
    entropy += '\n';
    for (std::size_t k = 0; k < t.size(); ++k) {
      entropy += fmt::format("{}", t[k]);
      for (const auto& col : entropy_cols) entropy += fmt::format(",{}", col[k]);
      entropy += '\n';
    }
    write_file_atomic(cmd.output / "sweep.csv", sweep);
    write_file_atomic(cmd.output / "entropy.csv", entropy);
    write_file_atomic(cmd.output / "entropy.svg", render_svg(chart));
  }
  return result;
}

EvalReport run_heisenberg(const Workspace& ws, const HeisenbergCommand& cmd) {
  cmd.validate();
  const auto outcome = ensure_model(ws, cmd.experiment);
  auto eval = cmd.eval;
  eval.closure = false;
  const auto& model = cmd.experiment.dataset.model;
  const auto suites = ensure_suites(ws, model, cmd.experiment.dataset.resolved_max_distance(), eval);
  auto out = evaluate_model(outcome.checkpoint.model, model, suites, eval, cmd.experiment.dataset.integrator.t_max,
                            ws.workers);
  out.report.label = fmt::format("Heisenberg M={}", model.sites);
  if (!cmd.output.empty()) {
    write_report(out.report, cmd.output);
    if (eval.dump_predictions) write_prediction_dump(out.predictions, suites, cmd.output);
  }
  return out.report;
}

}  // namespace spinlearn::harness

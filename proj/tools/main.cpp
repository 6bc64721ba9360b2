// spinlearn: dataset generation, training, evaluation and benchmarks.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spinlearn/datasets/generate.hpp"
#include "spinlearn/datasets/load.hpp"
#include "spinlearn/errors.hpp"
#include "spinlearn/harness/bench.hpp"
#include "spinlearn/harness/config.hpp"
#include "spinlearn/harness/evaluate.hpp"
#include "spinlearn/harness/pipeline.hpp"

namespace {

using namespace spinlearn;
using namespace spinlearn::harness;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  bool force = false;
  bool quiet = false;
  std::string work_dir;
};

void add_common(CLI::App* sub, Common& c, bool needs_config = true) {
  if (needs_config) sub->add_option("-c,--config", c.config, "JSON config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "override the primary seed of the config");
  sub->add_option("--workers", c.workers, "worker threads for generation and evaluation")->check(CLI::PositiveNumber);
  sub->add_flag("--force", c.force, "overwrite existing outputs");
  sub->add_flag("-q,--quiet", c.quiet, "no progress output");
}

Workspace workspace(const Common& c, const std::filesystem::path& config_work_dir) {
  Workspace ws;
  ws.root = c.work_dir.empty() ? config_work_dir : std::filesystem::path(c.work_dir);
  ws.workers = c.workers;
  ws.force = c.force;
  if (!c.quiet) ws.log = [](const std::string& line) { std::cerr << line << '\n'; };
  return ws;
}

template <typename T>
T parse_config(const std::string& path) {
  const auto j = load_json_file(path);
  try {
    return j.get<T>();
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void print_report(const EvalReport& r) {
  for (const auto& c : r.classes) {
    std::string line = fmt::format("{:9s} in-window {:.4f}", to_string(c.kind), window_mean(c.network, 0, r.train_t_max));
    if (r.eval_t_max > r.train_t_max + 1e-9) {
      line += fmt::format("  extrapolation {:.4f}", window_mean(c.network, r.train_t_max, r.eval_t_max));
    }
    if (c.has_closure) {
      line += fmt::format("  closure breakdowns {}  network<closure {:.2f}", c.closure_breakdowns, c.closure_ordering);
    }
    std::cout << line << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Learning driven spin-chain dynamics: datasets, training, evaluation"};
  app.require_subcommand(1);

  Common gen, trn, evl, base, bench, sweep, heis;
  auto* gen_cmd = app.add_subcommand("gen-data", "generate a dataset from a dataset config");
  add_common(gen_cmd, gen);
  std::string gen_output;
  gen_cmd->add_option("-o,--output", gen_output, "dataset directory (overrides config 'output')");

  auto* train_cmd = app.add_subcommand("train", "train a network on a dataset");
  add_common(train_cmd, trn);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a network on fresh drive suites");
  add_common(eval_cmd, evl);
  eval_cmd->add_option("--work-dir", evl.work_dir, "cache directory (overrides config 'work_dir')");

  auto* base_cmd = app.add_subcommand("baseline", "compare network, Gaussian closure and exact evolution");
  add_common(base_cmd, base);
  base_cmd->add_option("--work-dir", base.work_dir, "cache directory (overrides config 'work_dir')");

  auto* bench_cmd = app.add_subcommand("bench", "runtime of exact evolution versus network evaluation");
  add_common(bench_cmd, bench);

  auto* sweep_cmd = app.add_subcommand("sweep-g", "train and evaluate one model per longitudinal field g");
  add_common(sweep_cmd, sweep);
  sweep_cmd->add_option("--work-dir", sweep.work_dir, "cache directory (overrides config 'work_dir')");

  auto* heis_cmd = app.add_subcommand("heisenberg", "Heisenberg ring with the drive on J_x");
  add_common(heis_cmd, heis);
  heis_cmd->add_option("--work-dir", heis.work_dir, "cache directory (overrides config 'work_dir')");

  auto* dump_cmd = app.add_subcommand("dump-csv", "write one dataset split as CSV");
  std::string dump_dir, dump_split = "train", dump_out;
  dump_cmd->add_option("dataset", dump_dir, "dataset directory")->required()->check(CLI::ExistingDirectory);
  dump_cmd->add_option("--split", dump_split, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));
  dump_cmd->add_option("-o,--output", dump_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen_cmd->parsed()) {
    auto cmd = parse_config<GenDataCommand>(gen.config);
    if (!gen_output.empty()) cmd.output = gen_output;
    if (cmd.output.empty()) throw ConfigError("gen-data.output: no output directory given");
    if (gen.seed) cmd.dataset.root_seed = *gen.seed;
    datasets::GenerateOptions opts;
    opts.workers = gen.workers;
    opts.force = gen.force;
    opts.timestamp = datasets::default_timestamp();
    if (!gen.quiet) {
      opts.progress = [n = cmd.dataset.n_samples](std::size_t done, std::size_t) {
        if (done % std::max<std::size_t>(1, n / 20) == 0 || done == n) std::cerr << fmt::format("\r{}/{}", done, n);
        if (done == n) std::cerr << '\n';
      };
    }
    const auto m = datasets::generate_dataset(cmd.dataset, cmd.output, opts);
    std::cout << (cmd.output / "manifest.json").string() << '\n';
    if (!m.retries.empty()) std::cerr << m.retries.size() << " samples needed retries\n";
  } else if (train_cmd->parsed()) {
    auto cmd = parse_config<TrainCommand>(trn.config);
    if (trn.seed) cmd.train.seed = *trn.seed;
    const auto out = run_train(workspace(trn, "."), cmd);
    std::cout << out.path.string() << '\n' << out.loss_csv.string() << '\n';
  } else if (eval_cmd->parsed() || base_cmd->parsed()) {
    const bool baseline = base_cmd->parsed();
    const Common& c = baseline ? base : evl;
    auto cmd = parse_config<EvalCommand>(c.config);
    if (c.seed) cmd.eval.seed = *c.seed;
    if (baseline) cmd.eval.closure = true;
    if (cmd.output.empty()) throw ConfigError("eval-command.output: no report directory given");
    if (std::filesystem::exists(cmd.output / "summary.csv") && !c.force) {
      throw ConfigError(cmd.output.string() + ": report exists (use --force to overwrite)");
    }
    print_report(run_eval(workspace(c, cmd.work_dir), cmd));
  } else if (bench_cmd->parsed()) {
    auto cfg = parse_config<BenchConfig>(bench.config);
    if (bench.seed) cfg.seed = *bench.seed;
    const auto r = run_bench(cfg, workspace(bench, "."));
    std::cout << bench_csv(r);
  } else if (sweep_cmd->parsed()) {
    auto cmd = parse_config<SweepCommand>(sweep.config);
    if (sweep.seed) cmd.experiment.dataset.root_seed = *sweep.seed;
    const auto r = run_sweep_g(workspace(sweep, cmd.work_dir), cmd);
    for (std::size_t i = 0; i < r.g_values.size(); ++i) {
      std::cout << "g = " << r.g_values[i] << '\n';
      print_report(r.reports[i]);
    }
  } else if (heis_cmd->parsed()) {
    auto cmd = parse_config<HeisenbergCommand>(heis.config);
    if (heis.seed) cmd.experiment.dataset.root_seed = *heis.seed;
    print_report(run_heisenberg(workspace(heis, cmd.work_dir), cmd));
  } else if (dump_cmd->parsed()) {
    const auto samples = datasets::load_split(dump_dir, datasets::split_from_string(dump_split));
    if (dump_out.empty()) {
      datasets::dump_csv(samples, std::cout);
    } else {
      std::ofstream out(dump_out);
      if (!out) throw ConfigError("cannot write " + dump_out);
      datasets::dump_csv(samples, out);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const spinlearn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const spinlearn::CorruptionError& e) {
    std::cerr << "corrupt input: " << e.what() << '\n';
    return 2;
  } catch (const spinlearn::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

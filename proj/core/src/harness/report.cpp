#include "spinlearn/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "spinlearn/harness/pipeline.hpp"
#include "spinlearn/harness/svg.hpp"

namespace spinlearn::harness {

std::string curve_csv(const ClassReport& c) {
  std::string out = "t,count,network,zero_baseline";
  if (c.has_closure) out += ",closure,closure_count";
  if (!c.entropy_mean.empty()) out += ",entropy";
  out += '\n';
  for (std::size_t k = 0; k < c.network.t.size(); ++k) {
    out += fmt::format("{},{},{},{}", c.network.t[k], c.network.count[k], c.network.rmse[k], c.zero_baseline[k]);
    if (c.has_closure) out += fmt::format(",{},{}", c.closure.rmse[k], c.closure.count[k]);
    if (!c.entropy_mean.empty()) out += fmt::format(",{}", c.entropy_mean[k]);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const EvalReport& report) {
  std::string out =
      "class,samples,in_window_mean,extrapolation_mean,extrapolation_max,baseline_margin_min,"
      "physicality_violation_rate,closure_breakdowns,closure_ordering\n";
  for (const auto& c : report.classes) {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c.network.rmse.size(); ++k) {
      if (c.network.count[k]) margin = std::min(margin, c.zero_baseline[k] - c.network.rmse[k]);
    }
    const bool extrapolates = report.eval_t_max > report.train_t_max + 1e-9;
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(c.kind), c.samples,
                       window_mean(c.network, 0.0, report.train_t_max),
                       extrapolates ? window_mean(c.network, report.train_t_max, report.eval_t_max) : std::nan(""),
                       extrapolates ? window_max(c.network, report.train_t_max, report.eval_t_max) : std::nan(""),
                       margin, c.network.physicality_violation_rate,
                       c.has_closure ? fmt::format("{}", c.closure_breakdowns) : "",
                       c.has_closure ? fmt::format("{}", c.closure_ordering) : "");
  }
  return out;
}

std::string per_observable_csv(const EvalReport& report) {
  std::string out = "observable";
  for (const auto& c : report.classes) out += fmt::format(",{}", to_string(c.kind));
  out += '\n';
  for (std::size_t j = 0; j < report.observables.size(); ++j) {
    out += report.observables[j];
    for (const auto& c : report.classes) out += fmt::format(",{}", c.network.per_observable.at(j));
    out += '\n';
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "summary.csv", summary_csv(report));
  write_file_atomic(dir / "per_observable.csv", per_observable_csv(report));
  const auto chart_for = [&](std::string title, std::string y_label) {
    LineChart c;
    c.title = std::move(title);
    c.x_label = "Jt";
    c.y_label = std::move(y_label);
    c.marker_x = report.train_t_max;
    return c;
  };
  LineChart entropy_chart = chart_for("half-chain entropy " + report.label, "S(t)");
  for (const auto& c : report.classes) {
    const std::string name(to_string(c.kind));
    write_file_atomic(dir / ("rmse_" + name + ".csv"), curve_csv(c));
    LineChart chart = chart_for(name + " drives " + report.label, "sqrt(MSE)");
    chart.series.push_back({"network", c.network.t, c.network.rmse, false});
    chart.series.push_back({"zero parameters", c.network.t, c.zero_baseline, true});
    if (c.has_closure) chart.series.push_back({"Gaussian closure", c.closure.t, c.closure.rmse, false});
    write_file_atomic(dir / ("rmse_" + name + ".svg"), render_svg(chart));
    if (!c.entropy_mean.empty()) entropy_chart.series.push_back({name, c.network.t, c.entropy_mean, false});
  }
  if (!entropy_chart.series.empty()) write_file_atomic(dir / "entropy.svg", render_svg(entropy_chart));
  std::string timing;
  for (const auto& [stage, s] : report.timing) timing += fmt::format("{} {:.3f}s\n", stage, s);
  write_file_atomic(dir / "timing.txt", timing);
}

void write_prediction_dump(const Predictions& predictions, std::span<const EvalSuite> suites,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t si = 0; si < suites.size(); ++si) {
    const auto& suite = suites[si];
    if (suite.samples.empty()) continue;
    const auto names = qdyn::observable_names(suite.samples.front().series.max_distance());
    std::string out = "id,k,t";
    for (const auto& n : names) out += ",pred_" + n;
    for (const auto& n : names) out += ",true_" + n;
    out += '\n';
    for (std::size_t i = 0; i < suite.samples.size(); ++i) {
      const auto& truth = suite.samples[i].series;
      const auto& pred = predictions[si][i];
      for (std::size_t k = 0; k < pred.size(); ++k) {
        out += fmt::format("{},{},{}", suite.samples[i].id, k, truth.time(k));
        for (double v : pred.frames[k].flatten()) out += fmt::format(",{}", v);
        for (double v : truth.frames[k].flatten()) out += fmt::format(",{}", v);
        out += '\n';
      }
    }
    write_file_atomic(dir / ("predictions_" + std::string(to_string(suite.kind)) + ".csv"), out);
  }
}

}  // namespace spinlearn::harness

#include "spinlearn/neural/surrogate.hpp"

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "spinlearn/errors.hpp"

namespace spinlearn::neural {

std::string_view to_string(Architecture a) { return a == Architecture::kLstm ? "lstm" : "fcnn"; }

std::string_view to_string(Strategy s) { return s == Strategy::kFullEvolution ? "full" : "stepwise"; }

Architecture architecture_from_string(std::string_view name) {
  if (name == "lstm") return Architecture::kLstm;
  if (name == "fcnn") return Architecture::kFcnn;
  throw ConfigError("unknown architecture '" + std::string(name) + "' (expected lstm or fcnn)");
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "full") return Strategy::kFullEvolution;
  if (name == "stepwise") return Strategy::kStepWise;
  throw ConfigError("unknown strategy '" + std::string(name) + "' (expected full or stepwise)");
}

ArchitectureSpec ArchitectureSpec::defaults(Architecture arch, Strategy strategy) {
  ArchitectureSpec spec;
  spec.arch = arch;
  spec.strategy = strategy;
  spec.hidden = arch == Architecture::kLstm ? std::vector<int>{128, 128} : std::vector<int>{256, 256, 256, 256};
  return spec;
}

void ArchitectureSpec::validate() const {
  if (arch == Architecture::kLstm && strategy == Strategy::kStepWise) {
    throw ConfigError("step-wise strategy requires the fcnn architecture");
  }
  if (hidden.empty()) throw ConfigError("hidden: at least one hidden layer required");
  for (int h : hidden) {
    if (h <= 0) throw ConfigError("hidden: widths must be positive");
  }
}

void to_json(nlohmann::json& j, const ArchitectureSpec& spec) {
  j = nlohmann::json{{"arch", to_string(spec.arch)}, {"strategy", to_string(spec.strategy)}, {"hidden", spec.hidden}};
}

void from_json(const nlohmann::json& j, ArchitectureSpec& spec) {
  spec.arch = architecture_from_string(j.at("arch").get<std::string>());
  spec.strategy = strategy_from_string(j.value("strategy", std::string("full")));
  spec.hidden = j.contains("hidden") ? j.at("hidden").get<std::vector<int>>()
                                     : ArchitectureSpec::defaults(spec.arch, spec.strategy).hidden;
}

void to_json(nlohmann::json& j, const SurrogateShape& shape) {
  j = nlohmann::json{{"architecture", shape.arch}, {"n_obs", shape.n_obs}, {"n_frames", shape.n_frames},
                     {"dt", shape.dt}};
}

void from_json(const nlohmann::json& j, SurrogateShape& shape) {
  shape.arch = j.at("architecture").get<ArchitectureSpec>();
  shape.n_obs = j.at("n_obs").get<std::size_t>();
  shape.n_frames = j.at("n_frames").get<std::size_t>();
  shape.dt = j.at("dt").get<double>();
}

void ExampleSet::validate() const {
  if (n_frames < 2 || n_obs < 3) throw std::invalid_argument("example set needs >= 2 frames and >= 3 observables");
  if (!(dt > 0)) throw std::invalid_argument("example set dt must be positive");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i];
    if (e.drive.size() != n_frames || e.series.size() != n_frames * n_obs) {
      throw std::invalid_argument("example " + std::to_string(i) + " has inconsistent lengths");
    }
  }
}

std::vector<double> resample_drive(const drives::DriveTrajectory& drive, double dt, std::size_t n_frames) {
  std::vector<double> out(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) out[k] = drive.at(static_cast<double>(k) * dt);
  return out;
}

namespace {

std::vector<Eigen::Index> widths(const std::vector<int>& hidden) {
  return {hidden.begin(), hidden.end()};
}

void check_shape(const SurrogateShape& shape) {
  shape.arch.validate();
  if (shape.n_obs < 3) throw ConfigError("n_obs must be at least 3");
  if (shape.n_frames < 2) throw ConfigError("n_frames must be at least 2");
  if (!(shape.dt > 0)) throw ConfigError("dt must be positive");
}

Eigen::Index as_index(std::size_t n) { return static_cast<Eigen::Index>(n); }

}  // namespace

Surrogate::Surrogate(const SurrogateShape& shape, std::uint64_t seed) : shape_(shape) {
  check_shape(shape_);
  Rng rng(seed);
  const auto n_obs = as_index(shape_.n_obs);
  const auto hidden = widths(shape_.arch.hidden);
  if (shape_.arch.arch == Architecture::kLstm) {
    lstm_.emplace(5, hidden, n_obs);
    params_ = lstm_->initialize(rng);
  } else if (shape_.arch.strategy == Strategy::kFullEvolution) {
    fcnn_.emplace(as_index(shape_.n_frames) + 3, hidden, as_index(shape_.n_frames) * n_obs);
    params_ = fcnn_->initialize(rng);
  } else {
    fcnn_.emplace(n_obs + 2, hidden, n_obs);
    params_ = fcnn_->initialize(rng);
  }
}

Surrogate::Surrogate(const SurrogateShape& shape, ParameterSet<float> params) : Surrogate(shape, 0) {
  if (params.specs() != params_.specs()) {
    throw std::invalid_argument("parameter layout does not match the surrogate shape");
  }
  params_ = std::move(params);
}

std::vector<TensorSpec> Surrogate::layout() const { return lstm_ ? lstm_->layout() : fcnn_->layout(); }

Eigen::Index Surrogate::input_size() const { return lstm_ ? lstm_->input_size() : fcnn_->input_size(); }

std::vector<std::string> Surrogate::input_layout() const {
  if (lstm_) return {"D(t_k)", "t_k", "S_x(0)", "S_y(0)", "S_z(0)"};
  std::vector<std::string> names;
  if (shape_.arch.strategy == Strategy::kFullEvolution) {
    for (std::size_t k = 0; k < shape_.n_frames; ++k) names.push_back("D(t_" + std::to_string(k) + ")");
    names.insert(names.end(), {"S_x(0)", "S_y(0)", "S_z(0)"});
  } else {
    for (std::size_t j = 0; j < shape_.n_obs; ++j) names.push_back("S" + std::to_string(j) + "(t_k)");
    names.insert(names.end(), {"t_k", "D(t_k)"});
  }
  return names;
}

Matrix<float> Surrogate::lstm_inputs(std::span<const std::vector<double>> drives,
                                     std::span<const std::vector<double>> inits, std::size_t n_frames) const {
  const auto batch = as_index(drives.size());
  Matrix<float> x(5, as_index(n_frames) * batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const auto& d = drives[b];
    const auto& s0 = inits[b];
    for (Eigen::Index t = 0; t < as_index(n_frames); ++t) {
      auto col = x.col(t * batch + b);
      col(0) = static_cast<float>(d[t]);
      col(1) = static_cast<float>(static_cast<double>(t) * shape_.dt);
      for (int a = 0; a < 3; ++a) col(2 + a) = static_cast<float>(s0[a]);
    }
  }
  return x;
}

Surrogate::Batch Surrogate::make_batch(const ExampleSet& set, std::span<const std::size_t> indices) const {
  if (set.n_obs != shape_.n_obs) throw std::invalid_argument("example set observable count differs from the model");
  const std::size_t n = set.n_frames;
  const std::size_t n_obs = set.n_obs;
  const auto batch = as_index(indices.size());
  Batch out;
  if (lstm_) {
    std::vector<std::vector<double>> drives, inits;
    for (auto i : indices) {
      const auto& e = set.examples.at(i);
      drives.push_back(e.drive);
      inits.push_back({e.series[0], e.series[1], e.series[2]});
    }
    out.inputs = lstm_inputs(drives, inits, n);
    out.targets.resize(as_index(n_obs), as_index(n) * batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const auto& s = set.examples[indices[b]].series;
      for (Eigen::Index t = 0; t < as_index(n); ++t) {
        for (Eigen::Index j = 0; j < as_index(n_obs); ++j) {
          out.targets(j, t * batch + b) = static_cast<float>(s[t * n_obs + j]);
        }
      }
    }
    out.steps = as_index(n);
  } else if (shape_.arch.strategy == Strategy::kFullEvolution) {
    if (n != shape_.n_frames) throw std::invalid_argument("FCNN full evolution: frame count differs from the model");
    out.inputs.resize(as_index(n) + 3, batch);
    out.targets.resize(as_index(n * n_obs), batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const auto& e = set.examples.at(indices[b]);
      for (std::size_t k = 0; k < n; ++k) out.inputs(as_index(k), b) = static_cast<float>(e.drive[k]);
      for (int a = 0; a < 3; ++a) out.inputs(as_index(n) + a, b) = static_cast<float>(e.series[a]);
      for (std::size_t r = 0; r < n * n_obs; ++r) out.targets(as_index(r), b) = static_cast<float>(e.series[r]);
    }
  } else {
    // Teacher forcing: every (S(t_k), t_k, D(t_k)) -> S(t_{k+1}) pair uses the true S(t_k).
    const auto pairs = as_index(n - 1);
    out.inputs.resize(as_index(n_obs) + 2, pairs * batch);
    out.targets.resize(as_index(n_obs), pairs * batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const auto& e = set.examples.at(indices[b]);
      for (Eigen::Index k = 0; k < pairs; ++k) {
        const Eigen::Index c = k * batch + b;
        for (Eigen::Index j = 0; j < as_index(n_obs); ++j) {
          out.inputs(j, c) = static_cast<float>(e.series[k * n_obs + j]);
          out.targets(j, c) = static_cast<float>(e.series[(k + 1) * n_obs + j]);
        }
        out.inputs(as_index(n_obs), c) = static_cast<float>(static_cast<double>(k) * set.dt);
        out.inputs(as_index(n_obs) + 1, c) = static_cast<float>(e.drive[k]);
      }
    }
  }
  return out;
}

namespace {

double mse(const Matrix<float>& y, const Matrix<float>& target) {
  return (y - target).cast<double>().squaredNorm() / static_cast<double>(target.size());
}

}  // namespace

double Surrogate::loss(const Batch& batch) const {
  const Matrix<float> y = lstm_ ? lstm_->forward(params_, batch.inputs, batch.steps)
                                : fcnn_->forward(params_, batch.inputs);
  return mse(y, batch.targets);
}

double Surrogate::loss_and_gradient(const Batch& batch, ParameterSet<float>& grad) const {
  const float scale = 2.0f / static_cast<float>(batch.targets.size());
  if (lstm_) {
    typename Lstm<float>::Cache cache;
    const Matrix<float> y = lstm_->forward(params_, batch.inputs, batch.steps, &cache);
    lstm_->backward(params_, cache, scale * (y - batch.targets), grad);
    return mse(y, batch.targets);
  }
  typename Fcnn<float>::Cache cache;
  const Matrix<float> y = fcnn_->forward(params_, batch.inputs, &cache);
  fcnn_->backward(params_, cache, scale * (y - batch.targets), grad);
  return mse(y, batch.targets);
}

std::vector<qdyn::ObservableSeries> Surrogate::predict(std::span<const std::vector<double>> drives,
                                                       std::span<const qdyn::ObservableFrame> inits,
                                                       std::size_t n_frames) const {
  if (drives.size() != inits.size()) throw std::invalid_argument("predict: drive and initial-frame counts differ");
  if (n_frames < 1) throw std::invalid_argument("predict: n_frames must be positive");
  for (const auto& d : drives) {
    if (d.size() < n_frames) throw std::invalid_argument("predict: drive shorter than the requested frames");
  }
  const std::size_t n_obs = shape_.n_obs;
  const auto batch = as_index(drives.size());
  std::vector<qdyn::ObservableSeries> out(drives.size());
  std::vector<std::vector<double>> flat(drives.size(), std::vector<double>(n_frames * n_obs));

  if (lstm_) {
    std::vector<std::vector<double>> s0;
    for (const auto& f : inits) s0.push_back({f.locals[0], f.locals[1], f.locals[2]});
    const Matrix<float> y = lstm_->forward(params_, lstm_inputs(drives, s0, n_frames), as_index(n_frames));
    for (Eigen::Index b = 0; b < batch; ++b) {
      for (std::size_t t = 0; t < n_frames; ++t) {
        for (std::size_t j = 0; j < n_obs; ++j) flat[b][t * n_obs + j] = y(as_index(j), as_index(t) * batch + b);
      }
    }
  } else if (shape_.arch.strategy == Strategy::kFullEvolution) {
    if (n_frames != shape_.n_frames) {
      throw std::invalid_argument("FCNN full evolution predicts exactly " + std::to_string(shape_.n_frames) +
                                  " frames, requested " + std::to_string(n_frames));
    }
    Matrix<float> x(as_index(n_frames) + 3, batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      for (std::size_t k = 0; k < n_frames; ++k) x(as_index(k), b) = static_cast<float>(drives[b][k]);
      for (int a = 0; a < 3; ++a) x(as_index(n_frames) + a, b) = static_cast<float>(inits[b].locals[a]);
    }
    const Matrix<float> y = fcnn_->forward(params_, x);
    for (Eigen::Index b = 0; b < batch; ++b) {
      for (std::size_t r = 0; r < n_frames * n_obs; ++r) flat[b][r] = y(as_index(r), b);
    }
  } else {
    Matrix<float> x(as_index(n_obs) + 2, batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const auto f = inits[b].flatten();
      if (f.size() != n_obs) throw std::invalid_argument("predict: initial frame size differs from the model");
      for (std::size_t j = 0; j < n_obs; ++j) {
        flat[b][j] = f[j];
        x(as_index(j), b) = static_cast<float>(f[j]);
      }
    }
    for (std::size_t k = 0; k + 1 < n_frames; ++k) {
      for (Eigen::Index b = 0; b < batch; ++b) {
        x(as_index(n_obs), b) = static_cast<float>(static_cast<double>(k) * shape_.dt);
        x(as_index(n_obs) + 1, b) = static_cast<float>(drives[b][k]);
      }
      const Matrix<float> y = fcnn_->forward(params_, x);
      x.topRows(as_index(n_obs)) = y;
      for (Eigen::Index b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < n_obs; ++j) flat[b][(k + 1) * n_obs + j] = y(as_index(j), b);
      }
    }
  }
  for (std::size_t b = 0; b < out.size(); ++b) out[b] = qdyn::ObservableSeries::from_flat(flat[b], n_frames, shape_.dt);
  return out;
}

qdyn::ObservableSeries Surrogate::predict(const drives::DriveTrajectory& drive, const qdyn::ObservableFrame& init,
                                          std::size_t n_frames) const {
  const std::vector<std::vector<double>> d{resample_drive(drive, shape_.dt, n_frames)};
  return predict(d, std::span<const qdyn::ObservableFrame>(&init, 1), n_frames).front();
}

}  // namespace spinlearn::neural

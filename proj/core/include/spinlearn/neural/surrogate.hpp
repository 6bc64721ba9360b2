#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spinlearn/drives/drive.hpp"
#include "spinlearn/neural/fcnn.hpp"
#include "spinlearn/neural/lstm.hpp"
#include "spinlearn/neural/parameters.hpp"
#include "spinlearn/qdyn/observables.hpp"

namespace spinlearn::neural {

enum class Architecture { kLstm, kFcnn };
enum class Strategy { kFullEvolution, kStepWise };

std::string_view to_string(Architecture a);
std::string_view to_string(Strategy s);
Architecture architecture_from_string(std::string_view name);
Strategy strategy_from_string(std::string_view name);

/// Network family, training strategy and hidden widths. The step-wise strategy
/// is only defined for the FCNN.
struct ArchitectureSpec {
  Architecture arch = Architecture::kLstm;
  Strategy strategy = Strategy::kFullEvolution;
  std::vector<int> hidden{128, 128};

  /// Desk-scale widths: LSTM 2 x 128, FCNN 4 x 256.
  static ArchitectureSpec defaults(Architecture arch, Strategy strategy = Strategy::kFullEvolution);
  /// Throws std::invalid_argument for LSTM + step-wise or empty/negative widths.
  void validate() const;
  friend bool operator==(const ArchitectureSpec&, const ArchitectureSpec&) = default;
};

void to_json(nlohmann::json& j, const ArchitectureSpec& spec);
void from_json(const nlohmann::json& j, ArchitectureSpec& spec);

/// One trajectory on the sample grid t_k = k * dt.
struct Example {
  std::vector<double> drive;   // D(t_k), n_frames values
  std::vector<double> series;  // n_frames x n_obs, row-major
};

struct ExampleSet {
  std::size_t n_frames = 0;
  std::size_t n_obs = 0;
  double dt = 0.0;
  std::vector<Example> examples;

  std::size_t size() const noexcept { return examples.size(); }
  /// Throws std::invalid_argument on inconsistent array lengths.
  void validate() const;
};

/// Shapes fixed at construction: observable count, training sequence length and grid.
struct SurrogateShape {
  ArchitectureSpec arch;
  std::size_t n_obs = 0;
  std::size_t n_frames = 0;
  double dt = 0.125;

  friend bool operator==(const SurrogateShape&, const SurrogateShape&) = default;
};

void to_json(nlohmann::json& j, const SurrogateShape& shape);
void from_json(const nlohmann::json& j, SurrogateShape& shape);

/// A trained or freshly initialized surrogate network (float32).
///
/// Input layouts:
///   LSTM, per step k:         [D(t_k), t_k, S_x(0), S_y(0), S_z(0)]
///   FCNN full evolution:      [D(t_0), ..., D(t_{n-1}), S_x(0), S_y(0), S_z(0)]
///                             -> n x n_obs outputs, frame-major
///   FCNN step-wise:           [S(t_k) (all observables), t_k, D(t_k)] -> S(t_{k+1})
/// Times are in units of 1/J and not rescaled. Outputs are not clamped.
class Surrogate {
 public:
  struct Batch {
    Matrix<float> inputs;
    Matrix<float> targets;
    Eigen::Index steps = 1;  // LSTM sequence length; 1 otherwise
  };

  /// Parameters initialized from Rng(seed).
  Surrogate(const SurrogateShape& shape, std::uint64_t seed);
  /// Throws std::invalid_argument if the layout does not match the shape.
  Surrogate(const SurrogateShape& shape, ParameterSet<float> params);

  const SurrogateShape& shape() const noexcept { return shape_; }
  const ParameterSet<float>& params() const noexcept { return params_; }
  ParameterSet<float>& params() noexcept { return params_; }
  std::vector<TensorSpec> layout() const;
  Eigen::Index input_size() const;
  std::vector<std::string> input_layout() const;

  /// Training batch from the listed examples.
  Batch make_batch(const ExampleSet& set, std::span<const std::size_t> indices) const;
  /// Mean squared error over all entries of the batch targets.
  double loss(const Batch& batch) const;
  /// Loss and its gradient w.r.t. all parameters (overwrites `grad`).
  double loss_and_gradient(const Batch& batch, ParameterSet<float>& grad) const;

  /// Predicts `n_frames` frames on the grid k * dt from drive values at those
  /// times and the initial frame. The LSTM accepts any length; the FCNN full
  /// evolution requires the training length (std::invalid_argument otherwise);
  /// the step-wise FCNN returns `init` as frame 0 and rolls out the rest.
  std::vector<qdyn::ObservableSeries> predict(std::span<const std::vector<double>> drives,
                                              std::span<const qdyn::ObservableFrame> inits,
                                              std::size_t n_frames) const;
  qdyn::ObservableSeries predict(const drives::DriveTrajectory& drive, const qdyn::ObservableFrame& init,
                                 std::size_t n_frames) const;

 private:
  Matrix<float> lstm_inputs(std::span<const std::vector<double>> drives, std::span<const std::vector<double>> inits,
                            std::size_t n_frames) const;

  SurrogateShape shape_;
  std::optional<Lstm<float>> lstm_;
  std::optional<Fcnn<float>> fcnn_;
  ParameterSet<float> params_;
};

/// Drive values D(k * dt), k < n_frames.
std::vector<double> resample_drive(const drives::DriveTrajectory& drive, double dt, std::size_t n_frames);

}  // namespace spinlearn::neural

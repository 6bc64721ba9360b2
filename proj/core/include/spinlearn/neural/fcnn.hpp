#pragma once

#include <vector>

#include "spinlearn/neural/parameters.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::neural {

/// Fully connected network: affine + ReLU hidden layers, affine output.
/// Tensors "fc<k>.W" (out x in) and "fc<k>.b"; the last pair is the output layer.
/// Columns of inputs and outputs are independent samples.
///
/// ReLU'(0) is taken as 0.
template <typename S>
class Fcnn {
 public:
  struct Cache {
    std::vector<Matrix<S>> activations;  // input, then each hidden layer output
  };

  Fcnn(Eigen::Index input, std::vector<Eigen::Index> hidden, Eigen::Index output);

  Eigen::Index input_size() const noexcept { return input_; }
  Eigen::Index output_size() const noexcept { return output_; }
  const std::vector<Eigen::Index>& hidden_sizes() const noexcept { return hidden_; }
  const std::vector<TensorSpec>& layout() const noexcept { return layout_; }

  /// Glorot-uniform weights, zero biases.
  ParameterSet<S> initialize(Rng& rng) const;

  Matrix<S> forward(const ParameterSet<S>& params, const Matrix<S>& x, Cache* cache = nullptr) const;

  /// `grad` is overwritten. Returns dLoss/dInput when `d_input` is non-null.
  void backward(const ParameterSet<S>& params, const Cache& cache, const Matrix<S>& d_output,
                ParameterSet<S>& grad, Matrix<S>* d_input = nullptr) const;

 private:
  Eigen::Index input_;
  std::vector<Eigen::Index> hidden_;
  Eigen::Index output_;
  std::vector<TensorSpec> layout_;
};

extern template class Fcnn<float>;
extern template class Fcnn<double>;

}  // namespace spinlearn::neural

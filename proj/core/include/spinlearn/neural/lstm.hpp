#pragma once

#include <vector>

#include "spinlearn/neural/parameters.hpp"
#include "spinlearn/rng.hpp"

namespace spinlearn::neural {

/// Stacked LSTM with a linear read-out applied at every step.
///
/// Per layer the four gates share one weight matrix W (4H x (H + in)) acting on
/// the concatenation [h_{t-1}, x_t], rows ordered forget, input, candidate,
/// output, and one bias b (4H):
///   f = sig(W_f [h, x] + b_f)   i = sig(W_i [h, x] + b_i)
///   C~ = tanh(W_C [h, x] + b_C) o = sig(W_o [h, x] + b_o)
///   C_t = f * C_{t-1} + i * C~   h_t = o * tanh(C_t)
/// with h_0 = C_0 = 0. Tensors: "lstm<k>.W", "lstm<k>.b", ..., "head.W", "head.b".
///
/// Sequences are batched time-major: column t * batch + b of an input or output
/// matrix holds step t of sequence b.
template <typename S>
class Lstm {
 public:
  struct LayerCache {
    Matrix<S> gates;  // activated f, i, C~, o stacked: 4H x (T * B)
    Matrix<S> cell;   // C_t
    Matrix<S> tanh_cell;
    Matrix<S> hidden;  // h_t
  };
  struct Cache {
    Eigen::Index steps = 0;
    Eigen::Index batch = 0;
    Matrix<S> inputs;
    std::vector<LayerCache> layers;
  };

  Lstm(Eigen::Index input, std::vector<Eigen::Index> hidden, Eigen::Index output);

  Eigen::Index input_size() const noexcept { return input_; }
  Eigen::Index output_size() const noexcept { return output_; }
  const std::vector<Eigen::Index>& hidden_sizes() const noexcept { return hidden_; }
  const std::vector<TensorSpec>& layout() const noexcept { return layout_; }

  /// Glorot-uniform weights, zero biases, forget-gate bias +1. Pure in (rng state, shapes).
  ParameterSet<S> initialize(Rng& rng) const;

  /// x: input_size x (steps * batch). Returns output_size x (steps * batch).
  /// Fills `cache` for backward when non-null.
  Matrix<S> forward(const ParameterSet<S>& params, const Matrix<S>& x, Eigen::Index steps,
                    Cache* cache = nullptr) const;

  /// Gradients of a scalar loss given dLoss/dOutput; `grad` is overwritten.
  void backward(const ParameterSet<S>& params, const Cache& cache, const Matrix<S>& d_output,
                ParameterSet<S>& grad) const;

 private:
  Eigen::Index input_;
  std::vector<Eigen::Index> hidden_;
  Eigen::Index output_;
  std::vector<TensorSpec> layout_;
};

extern template class Lstm<float>;
extern template class Lstm<double>;

}  // namespace spinlearn::neural

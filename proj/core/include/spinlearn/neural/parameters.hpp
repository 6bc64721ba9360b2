#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spinlearn/rng.hpp"

namespace spinlearn::neural {

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Shape and position of one tensor inside a flat parameter vector.
/// Tensors are column-major and packed in declaration order.
struct TensorSpec {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index offset = 0;

  Eigen::Index size() const noexcept { return rows * cols; }
  friend bool operator==(const TensorSpec&, const TensorSpec&) = default;
};

/// Appends tensors to a layout, assigning offsets.
class LayoutBuilder {
 public:
  void add(std::string name, Eigen::Index rows, Eigen::Index cols);
  std::vector<TensorSpec> finish() { return std::move(specs_); }

 private:
  std::vector<TensorSpec> specs_;
  Eigen::Index next_ = 0;
};

Eigen::Index layout_size(const std::vector<TensorSpec>& specs);

/// All parameters (or gradients, or optimizer moments) of one network.
template <typename S>
class ParameterSet {
 public:
  ParameterSet() = default;
  /// Zero-initialized.
  explicit ParameterSet(std::vector<TensorSpec> specs);

  const std::vector<TensorSpec>& specs() const noexcept { return specs_; }
  Vector<S>& values() noexcept { return values_; }
  const Vector<S>& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }

  Eigen::Map<Matrix<S>> tensor(std::size_t i);
  Eigen::Map<const Matrix<S>> tensor(std::size_t i) const;
  /// Throws std::out_of_range for an unknown name.
  std::size_t index_of(std::string_view name) const;

  void set_zero() { values_.setZero(); }
  bool all_finite() const { return values_.allFinite(); }

  template <typename T>
  ParameterSet<T> cast() const {
    ParameterSet<T> out(specs_);
    out.values() = values_.template cast<T>();
    return out;
  }

 private:
  std::vector<TensorSpec> specs_;
  Vector<S> values_;
};

/// Fills a weight tensor with U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
template <typename S>
void glorot_uniform(Eigen::Map<Matrix<S>> w, Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng);

extern template class ParameterSet<float>;
extern template class ParameterSet<double>;

}  // namespace spinlearn::neural

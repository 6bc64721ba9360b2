#include "spinlearn/neural/parameters.hpp"

#include <cmath>
#include <stdexcept>

namespace spinlearn::neural {

void LayoutBuilder::add(std::string name, Eigen::Index rows, Eigen::Index cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("tensor " + name + " has an empty shape");
  specs_.push_back(TensorSpec{std::move(name), rows, cols, next_});
  next_ += rows * cols;
}

Eigen::Index layout_size(const std::vector<TensorSpec>& specs) {
  return specs.empty() ? 0 : specs.back().offset + specs.back().size();
}

template <typename S>
ParameterSet<S>::ParameterSet(std::vector<TensorSpec> specs) : specs_(std::move(specs)) {
  values_ = Vector<S>::Zero(layout_size(specs_));
}

template <typename S>
Eigen::Map<Matrix<S>> ParameterSet<S>::tensor(std::size_t i) {
  const TensorSpec& s = specs_.at(i);
  return Eigen::Map<Matrix<S>>(values_.data() + s.offset, s.rows, s.cols);
}

template <typename S>
Eigen::Map<const Matrix<S>> ParameterSet<S>::tensor(std::size_t i) const {
  const TensorSpec& s = specs_.at(i);
  return Eigen::Map<const Matrix<S>>(values_.data() + s.offset, s.rows, s.cols);
}

template <typename S>
std::size_t ParameterSet<S>::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == name) return i;
  }
  throw std::out_of_range("no tensor named " + std::string(name));
}

template <typename S>
void glorot_uniform(Eigen::Map<Matrix<S>> w, Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = static_cast<S>(rng.uniform(-a, a));
  }
}

template class ParameterSet<float>;
template class ParameterSet<double>;
template void glorot_uniform<float>(Eigen::Map<Matrix<float>>, Eigen::Index, Eigen::Index, Rng&);
template void glorot_uniform<double>(Eigen::Map<Matrix<double>>, Eigen::Index, Eigen::Index, Rng&);

}  // namespace spinlearn::neural

#include "spinlearn/neural/fcnn.hpp"

#include <stdexcept>
#include <string>

namespace spinlearn::neural {

template <typename S>
Fcnn<S>::Fcnn(Eigen::Index input, std::vector<Eigen::Index> hidden, Eigen::Index output)
    : input_(input), hidden_(std::move(hidden)), output_(output) {
  if (input_ <= 0 || output_ <= 0) throw std::invalid_argument("FCNN needs positive input and output sizes");
  LayoutBuilder b;
  Eigen::Index in = input_;
  for (std::size_t l = 0; l <= hidden_.size(); ++l) {
    const Eigen::Index out = l < hidden_.size() ? hidden_[l] : output_;
    if (out <= 0) throw std::invalid_argument("FCNN layer sizes must be positive");
    b.add("fc" + std::to_string(l) + ".W", out, in);
    b.add("fc" + std::to_string(l) + ".b", out, 1);
    in = out;
  }
  layout_ = b.finish();
}

template <typename S>
ParameterSet<S> Fcnn<S>::initialize(Rng& rng) const {
  ParameterSet<S> p(layout_);
  for (std::size_t l = 0; l <= hidden_.size(); ++l) {
    auto w = p.tensor(2 * l);
    glorot_uniform<S>(w, w.cols(), w.rows(), rng);
  }
  return p;
}

template <typename S>
Matrix<S> Fcnn<S>::forward(const ParameterSet<S>& params, const Matrix<S>& x, Cache* cache) const {
  if (x.rows() != input_) {
    throw std::invalid_argument("FCNN input has " + std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(input_));
  }
  Cache local;
  Cache& c = cache ? *cache : local;
  c.activations.assign(1, x);
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    Matrix<S> a = params.tensor(2 * l) * c.activations.back();
    a.colwise() += params.tensor(2 * l + 1).col(0);
    a = a.cwiseMax(S(0));
    c.activations.push_back(std::move(a));
  }
  const std::size_t last = hidden_.size();
  Matrix<S> y = params.tensor(2 * last) * c.activations.back();
  y.colwise() += params.tensor(2 * last + 1).col(0);
  return y;
}

template <typename S>
void Fcnn<S>::backward(const ParameterSet<S>& params, const Cache& cache, const Matrix<S>& d_output,
                       ParameterSet<S>& grad, Matrix<S>* d_input) const {
  if (grad.specs() != layout_) grad = ParameterSet<S>(layout_);
  Matrix<S> delta = d_output;
  for (std::size_t l = hidden_.size() + 1; l-- > 0;) {
    const Matrix<S>& a_in = cache.activations[l];
    grad.tensor(2 * l).noalias() = delta * a_in.transpose();
    grad.tensor(2 * l + 1).col(0) = delta.rowwise().sum();
    if (l == 0 && d_input == nullptr) break;
    Matrix<S> back = params.tensor(2 * l).transpose() * delta;
    if (l == 0) {
      *d_input = std::move(back);
      break;
    }
    // a_in is the ReLU output of layer l-1; its derivative is 1 where a_in > 0.
    delta = (a_in.array() > S(0)).select(back.array(), S(0)).matrix();
  }
}

template class Fcnn<float>;
template class Fcnn<double>;

}  // namespace spinlearn::neural

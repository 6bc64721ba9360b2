#include "spinlearn/neural/lstm.hpp"

#include <stdexcept>
#include <string>

namespace spinlearn::neural {

namespace {

template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
  using S = typename Derived::Scalar;
  return S(1) / (S(1) + (-z).exp());
}

}  // namespace

template <typename S>
Lstm<S>::Lstm(Eigen::Index input, std::vector<Eigen::Index> hidden, Eigen::Index output)
    : input_(input), hidden_(std::move(hidden)), output_(output) {
  if (input_ <= 0 || output_ <= 0 || hidden_.empty()) throw std::invalid_argument("LSTM needs input, hidden and output sizes");
  LayoutBuilder b;
  Eigen::Index in = input_;
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    const Eigen::Index H = hidden_[l];
    if (H <= 0) throw std::invalid_argument("LSTM hidden sizes must be positive");
    b.add("lstm" + std::to_string(l) + ".W", 4 * H, H + in);
    b.add("lstm" + std::to_string(l) + ".b", 4 * H, 1);
    in = H;
  }
  b.add("head.W", output_, in);
  b.add("head.b", output_, 1);
  layout_ = b.finish();
}

template <typename S>
ParameterSet<S> Lstm<S>::initialize(Rng& rng) const {
  ParameterSet<S> p(layout_);
  Eigen::Index in = input_;
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    const Eigen::Index H = hidden_[l];
    glorot_uniform<S>(p.tensor(2 * l), H + in, 4 * H, rng);
    p.tensor(2 * l + 1).topRows(H).setConstant(S(1));
    in = H;
  }
  glorot_uniform<S>(p.tensor(2 * hidden_.size()), in, output_, rng);
  return p;
}

template <typename S>
Matrix<S> Lstm<S>::forward(const ParameterSet<S>& params, const Matrix<S>& x, Eigen::Index steps,
                           Cache* cache) const {
  if (x.rows() != input_) {
    throw std::invalid_argument("LSTM input has " + std::to_string(x.rows()) + " rows, expected " +
                                std::to_string(input_));
  }
  if (steps <= 0 || x.cols() % steps != 0) throw std::invalid_argument("LSTM input columns not divisible by steps");
  const Eigen::Index B = x.cols() / steps;

  Cache local;
  Cache& c = cache ? *cache : local;
  c.steps = steps;
  c.batch = B;
  c.inputs = x;
  c.layers.resize(hidden_.size());

  const Matrix<S>* layer_in = &c.inputs;
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    const Eigen::Index H = hidden_[l];
    const auto W = params.tensor(2 * l);
    const auto bias = params.tensor(2 * l + 1);
    const auto Wh = W.leftCols(H);
    const auto Wx = W.rightCols(W.cols() - H);
    LayerCache& lc = c.layers[l];

    lc.gates.noalias() = Wx * (*layer_in);
    lc.gates.colwise() += bias.col(0);
    lc.cell.resize(H, steps * B);
    lc.tanh_cell.resize(H, steps * B);
    lc.hidden.resize(H, steps * B);

    for (Eigen::Index t = 0; t < steps; ++t) {
      auto z = lc.gates.middleCols(t * B, B);
      if (t > 0) z.noalias() += Wh * lc.hidden.middleCols((t - 1) * B, B);
      z.topRows(2 * H).array() = sigmoid(z.topRows(2 * H).array());
      z.middleRows(2 * H, H).array() = z.middleRows(2 * H, H).array().tanh();
      z.bottomRows(H).array() = sigmoid(z.bottomRows(H).array());

      auto cell = lc.cell.middleCols(t * B, B);
      cell.array() = z.middleRows(H, H).array() * z.middleRows(2 * H, H).array();
      if (t > 0) cell.array() += z.topRows(H).array() * lc.cell.middleCols((t - 1) * B, B).array();
      lc.tanh_cell.middleCols(t * B, B).array() = cell.array().tanh();
      lc.hidden.middleCols(t * B, B).array() = z.bottomRows(H).array() * lc.tanh_cell.middleCols(t * B, B).array();
    }
    layer_in = &lc.hidden;
  }

  const std::size_t head = 2 * hidden_.size();
  Matrix<S> y = params.tensor(head) * (*layer_in);
  y.colwise() += params.tensor(head + 1).col(0);
  return y;
}

template <typename S>
void Lstm<S>::backward(const ParameterSet<S>& params, const Cache& cache, const Matrix<S>& d_output,
                       ParameterSet<S>& grad) const {
  const Eigen::Index T = cache.steps, B = cache.batch;
  if (d_output.rows() != output_ || d_output.cols() != T * B) throw std::invalid_argument("output gradient shape mismatch");
  if (grad.specs() != layout_) grad = ParameterSet<S>(layout_);

  const std::size_t L = hidden_.size();
  const std::size_t head = 2 * L;
  const Matrix<S>& top = cache.layers.back().hidden;
  grad.tensor(head).noalias() = d_output * top.transpose();
  grad.tensor(head + 1).col(0) = d_output.rowwise().sum();
  Matrix<S> d_hidden = params.tensor(head).transpose() * d_output;

  Matrix<S> dz;
  Matrix<S> dh_next, dc_next, dh, dc;
  for (std::size_t li = L; li-- > 0;) {
    const Eigen::Index H = hidden_[li];
    const LayerCache& lc = cache.layers[li];
    const Matrix<S>& x = li == 0 ? cache.inputs : cache.layers[li - 1].hidden;
    const auto W = params.tensor(2 * li);
    const auto Wh = W.leftCols(H);
    const auto Wx = W.rightCols(W.cols() - H);

    dz.resize(4 * H, T * B);
    dh_next = Matrix<S>::Zero(H, B);
    dc_next = Matrix<S>::Zero(H, B);
    for (Eigen::Index t = T; t-- > 0;) {
      const auto g = lc.gates.middleCols(t * B, B).array();
      const auto f = g.topRows(H), in = g.middleRows(H, H), cand = g.middleRows(2 * H, H), o = g.bottomRows(H);
      const auto tc = lc.tanh_cell.middleCols(t * B, B).array();

      dh = d_hidden.middleCols(t * B, B) + dh_next;
      dc = dc_next;
      dc.array() += dh.array() * o * (S(1) - tc.square());

      auto z = dz.middleCols(t * B, B);
      if (t > 0) {
        z.topRows(H).array() = dc.array() * lc.cell.middleCols((t - 1) * B, B).array() * f * (S(1) - f);
      } else {
        z.topRows(H).setZero();
      }
      z.middleRows(H, H).array() = dc.array() * cand * in * (S(1) - in);
      z.middleRows(2 * H, H).array() = dc.array() * in * (S(1) - cand.square());
      z.bottomRows(H).array() = dh.array() * tc * o * (S(1) - o);
      dc_next.array() = dc.array() * f;
      if (t > 0) dh_next.noalias() = Wh.transpose() * z;
    }

    auto gW = grad.tensor(2 * li);
    if (T > 1) {
      gW.leftCols(H).noalias() = dz.rightCols((T - 1) * B) * lc.hidden.leftCols((T - 1) * B).transpose();
    } else {
      gW.leftCols(H).setZero();
    }
    gW.rightCols(W.cols() - H).noalias() = dz * x.transpose();
    grad.tensor(2 * li + 1).col(0) = dz.rowwise().sum();
    if (li > 0) d_hidden.noalias() = Wx.transpose() * dz;
  }
}

template class Lstm<float>;
template class Lstm<double>;

}  // namespace spinlearn::neural

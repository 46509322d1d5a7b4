#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qoeslice/common/rng.hpp"

namespace qoeslice::rl {

// Fully connected network with tanh hidden layers and a linear output layer.
// All weights live in one flat parameter vector laid out layer by layer as
// W (out x in, column-major) followed by b (out). Samples are columns.
template <typename Scalar>
class BasicMlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Cache {
    std::vector<Matrix> activations;  // input, then every hidden layer output
  };

  BasicMlp() = default;

  explicit BasicMlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("BasicMlp: need at least input and output sizes");
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      if (sizes_[l] <= 0 || sizes_[l + 1] <= 0) throw std::invalid_argument("BasicMlp: layer sizes must be positive");
      n += static_cast<std::size_t>(sizes_[l + 1]) * (static_cast<std::size_t>(sizes_[l]) + 1);
    }
    params_ = Vector::Zero(static_cast<Eigen::Index>(n));
  }

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t num_layers() const { return sizes_.size() - 1; }
  Eigen::Index num_params() const { return params_.size(); }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }

  // Orthogonal initialisation: hidden layers with gain sqrt(2), the output
  // layer with `output_gain`; zero biases.
  void init_orthogonal(Rng& rng, double output_gain) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const int out = sizes_[l + 1];
      const int in = sizes_[l];
      const double gain = (l + 1 == num_layers()) ? output_gain : std::sqrt(2.0);
      const int big = std::max(out, in);
      Eigen::MatrixXd g(big, big);
      for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      Eigen::MatrixXd q = qr.householderQ();
      // Sign correction makes the draw uniform over the orthogonal group.
      const Eigen::MatrixXd r = qr.matrixQR().template triangularView<Eigen::Upper>();
      for (int c = 0; c < big; ++c) {
        if (r(c, c) < 0) q.col(c) *= -1.0;
      }
      weight(l) = (gain * q.topLeftCorner(out, in)).template cast<Scalar>();
      bias(l).setZero();
    }
  }

  Eigen::Map<Matrix> weight(std::size_t l) {
    return Eigen::Map<Matrix>(params_.data() + offset(l), sizes_[l + 1], sizes_[l]);
  }
  Eigen::Map<const Matrix> weight(std::size_t l) const {
    return Eigen::Map<const Matrix>(params_.data() + offset(l), sizes_[l + 1], sizes_[l]);
  }
  Eigen::Map<Vector> bias(std::size_t l) {
    return Eigen::Map<Vector>(params_.data() + offset(l) + sizes_[l + 1] * sizes_[l], sizes_[l + 1]);
  }
  Eigen::Map<const Vector> bias(std::size_t l) const {
    return Eigen::Map<const Vector>(params_.data() + offset(l) + sizes_[l + 1] * sizes_[l], sizes_[l + 1]);
  }

  // x: input_size x batch. Returns output_size x batch. Fills `cache` when given.
  Matrix forward(const Matrix& x, Cache* cache = nullptr) const {
    if (x.rows() != input_size()) throw std::invalid_argument("BasicMlp::forward: input dimension mismatch");
    if (cache) {
      cache->activations.resize(num_layers());
      cache->activations[0] = x;
    }
    Matrix a = x;
    for (std::size_t l = 0; l < num_layers(); ++l) {
      Matrix z = weight(l) * a;
      z.colwise() += bias(l);
      if (l + 1 == num_layers()) return z;
      a = z.array().tanh().matrix();
      if (cache) cache->activations[l + 1] = a;
    }
    return a;
  }

  // Gradient of a loss w.r.t. the flat parameters, given dL/d(output).
  Vector backward(const Cache& cache, const Matrix& d_out) const {
    Vector grad = Vector::Zero(num_params());
    Matrix dz = d_out;
    for (std::size_t l = num_layers(); l-- > 0;) {
      const Matrix& a_in = cache.activations[l];
      const Eigen::Index in = sizes_[l];
      const Eigen::Index out = sizes_[l + 1];
      Eigen::Map<Matrix>(grad.data() + offset(l), out, in).noalias() = dz * a_in.transpose();
      Eigen::Map<Vector>(grad.data() + offset(l) + out * in, out) = dz.rowwise().sum();
      if (l == 0) break;
      Matrix da = weight(l).transpose() * dz;
      dz = (da.array() * (Scalar(1) - a_in.array().square())).matrix();
    }
    return grad;
  }

  template <typename Other>
  BasicMlp<Other> cast() const {
    BasicMlp<Other> out(sizes_);
    out.params() = params_.template cast<Other>();
    return out;
  }

 private:
  Eigen::Index offset(std::size_t l) const {
    Eigen::Index off = 0;
    for (std::size_t i = 0; i < l; ++i) off += static_cast<Eigen::Index>(sizes_[i + 1]) * (sizes_[i] + 1);
    return off;
  }

  std::vector<int> sizes_;
  Vector params_;
};

using Mlp = BasicMlp<float>;

}  // namespace qoeslice::rl

#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace qoeslice::rl {

// Adam over a flat parameter vector.
template <typename Scalar>
class BasicAdam {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Options {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  BasicAdam() = default;
  BasicAdam(Eigen::Index n, Options opt) : opt_(opt), m_(Vector::Zero(n)), v_(Vector::Zero(n)) {}

  void step(Vector& params, const Vector& grad) {
    ++t_;
    m_ = Scalar(opt_.beta1) * m_ + Scalar(1.0 - opt_.beta1) * grad;
    v_ = Scalar(opt_.beta2) * v_ + Scalar(1.0 - opt_.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
    const Scalar step_size = Scalar(opt_.lr / c1);
    const Scalar inv_c2 = Scalar(1.0 / std::sqrt(c2));
    params.array() -= step_size * m_.array() / (v_.array().sqrt() * inv_c2 + Scalar(opt_.eps));
  }

  long steps() const { return t_; }

 private:
  Options opt_;
  Vector m_;
  Vector v_;
  long t_ = 0;
};

using Adam = BasicAdam<float>;

// Rescales `grad` in place so its L2 norm is at most max_norm. Returns the norm before clipping.
template <typename Vector>
double clip_grad_norm(Vector& grad, double max_norm) {
  const double norm = static_cast<double>(grad.norm());
  if (max_norm > 0.0 && norm > max_norm) grad *= static_cast<typename Vector::Scalar>(max_norm / (norm + 1e-6));
  return norm;
}

}  // namespace qoeslice::rl

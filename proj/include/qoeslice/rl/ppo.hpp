#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qoeslice/common/rng.hpp"
#include "qoeslice/rl/action_head.hpp"
#include "qoeslice/rl/adam.hpp"
#include "qoeslice/rl/mlp.hpp"

namespace qoeslice::rl {

enum class Variant : std::uint8_t { PPO = 0, QAPPO = 1 };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct PolicyParams {
  Mlp actor;
  Mlp critic;
  Variant variant = Variant::QAPPO;
  std::uint64_t seed = 0;
  int pool_size = 0;
  std::uint32_t version = 1;

  int feature_dim() const { return actor.input_size(); }
};

// Actor and critic share the hidden layout; the actor ends in
// action_logits(pool_size) outputs, the critic in one.
PolicyParams init_params(int pool_size, const std::vector<int>& hidden, Variant variant, std::uint64_t seed);

struct ActResult {
  ActionChoice choice;
  float log_prob = 0.0f;  // meaningless for the sentinel
  float value = 0.0f;
};

ActResult act(const PolicyParams& params, std::span<const float> features, const ActionMask& mask, ActMode mode,
              Rng& rng);

struct PpoConfig {
  double clip = 0.1;
  double lr = 1e-4;
  int epochs = 10;
  int minibatch = 1024;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
};

// Training samples, one column of `features` per sample. Sentinel steps are
// never part of a batch.
struct Batch {
  int pool_size = 0;
  Eigen::MatrixXf features;
  std::vector<ActionChoice> choices;
  std::vector<std::array<bool, kModeLogits>> mode_ok;
  std::vector<std::uint8_t> node_ok;  // size() * pool_size flags for the chosen mode
  std::vector<int> chain_length;
  std::vector<double> old_log_prob;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return choices.size(); }
  ChoiceMaskView mask(std::size_t i) const {
    return {mode_ok[i], node_ok.data() + i * static_cast<std::size_t>(pool_size), pool_size, chain_length[i]};
  }
};

struct ActorSample {
  const ActionChoice* choice = nullptr;
  ChoiceMaskView mask;
  double old_log_prob = 0.0;
  double advantage = 0.0;
};

template <typename Scalar>
struct ActorLoss {
  Scalar loss = 0;       // -surrogate - entropy_coef * entropy
  Scalar surrogate = 0;  // mean of min(ratio * A, clip(ratio) * A)
  Scalar entropy = 0;    // mean summed factor entropy
  Scalar approx_kl = 0;
  Scalar clip_fraction = 0;
};

// Clipped-surrogate actor loss over the columns of x. Adds the gradient with
// respect to the actor parameters into *grad when grad != nullptr.
template <typename Scalar>
ActorLoss<Scalar> actor_loss(const BasicMlp<Scalar>& actor,
                             const typename BasicMlp<Scalar>::Matrix& x, std::span<const ActorSample> samples,
                             double clip, double entropy_coef, typename BasicMlp<Scalar>::Vector* grad) {
  using Matrix = typename BasicMlp<Scalar>::Matrix;
  typename BasicMlp<Scalar>::Cache cache;
  const Matrix logits = actor.forward(x, grad ? &cache : nullptr);
  const auto n = static_cast<Scalar>(samples.size());
  Matrix d_logits;
  if (grad) d_logits = Matrix::Zero(logits.rows(), logits.cols());

  ActorLoss<Scalar> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ActorSample& s = samples[i];
    const auto col = static_cast<Eigen::Index>(i);
    const auto [log_p, entropy] = choice_log_prob<Scalar>(logits.col(col).data(), s.mask, *s.choice);
    const Scalar log_ratio = log_p - Scalar(s.old_log_prob);
    const Scalar ratio = std::exp(log_ratio);
    const Scalar adv = Scalar(s.advantage);
    const Scalar clipped = std::clamp(ratio, Scalar(1 - clip), Scalar(1 + clip));
    const Scalar unclipped_obj = ratio * adv;
    const Scalar clipped_obj = clipped * adv;
    const bool unclipped_active = unclipped_obj <= clipped_obj;
    out.surrogate += std::min(unclipped_obj, clipped_obj) / n;
    out.entropy += entropy / n;
    out.approx_kl += ((ratio - 1) - log_ratio) / n;
    if (std::abs(ratio - 1) > Scalar(clip)) out.clip_fraction += 1 / n;
    if (grad) {
      // d loss / d log_p: only the unclipped branch carries gradient.
      const Scalar d_logp = unclipped_active ? -unclipped_obj / n : Scalar(0);
      const Scalar d_ent = -Scalar(entropy_coef) / n;
      choice_log_prob<Scalar>(logits.col(col).data(), s.mask, *s.choice, d_logp, d_ent, d_logits.col(col).data());
    }
  }
  out.loss = -out.surrogate - Scalar(entropy_coef) * out.entropy;
  if (grad) *grad += actor.backward(cache, d_logits);
  return out;
}

// value_coef * mean((V - R)^2); gradient added into *grad when given.
template <typename Scalar>
Scalar critic_loss(const BasicMlp<Scalar>& critic, const typename BasicMlp<Scalar>::Matrix& x,
                   std::span<const double> returns, double value_coef, typename BasicMlp<Scalar>::Vector* grad) {
  using Matrix = typename BasicMlp<Scalar>::Matrix;
  typename BasicMlp<Scalar>::Cache cache;
  const Matrix v = critic.forward(x, grad ? &cache : nullptr);
  const auto n = static_cast<Scalar>(returns.size());
  Matrix d_v(1, v.cols());
  Scalar loss = 0;
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const Scalar err = v(0, i) - Scalar(returns[static_cast<std::size_t>(i)]);
    loss += Scalar(value_coef) * err * err / n;
    d_v(0, i) = Scalar(2 * value_coef) * err / n;
  }
  if (grad) *grad += critic.backward(cache, d_v);
  return loss;
}

struct LossStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  std::size_t minibatches = 0;
};

struct Optimizers {
  Adam actor;
  Adam critic;

  static Optimizers for_params(const PolicyParams& p, double lr);
};

// Epochs of shuffled minibatch updates. Advantages in the batch must already
// be normalised. Throws std::runtime_error on a non-finite loss.
LossStats ppo_update(PolicyParams& params, Optimizers& opt, const Batch& batch, const PpoConfig& cfg, Rng& rng);

}  // namespace qoeslice::rl

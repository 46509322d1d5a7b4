#include "qoeslice/rl/ppo.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qoeslice/rl/features.hpp"

namespace qoeslice::rl {

std::string to_string(Variant v) { return v == Variant::PPO ? "PPO" : "QAPPO"; }

Variant variant_from_string(const std::string& name) {
  if (name == "PPO" || name == "ppo") return Variant::PPO;
  if (name == "QAPPO" || name == "qappo") return Variant::QAPPO;
  throw std::invalid_argument("unknown variant: " + name + " (expected PPO or QAPPO)");
}

PolicyParams init_params(int pool_size, const std::vector<int>& hidden, Variant variant, std::uint64_t seed) {
  PolicyParams p;
  p.variant = variant;
  p.seed = seed;
  p.pool_size = pool_size;
  std::vector<int> actor_sizes{feature_dim(pool_size)};
  actor_sizes.insert(actor_sizes.end(), hidden.begin(), hidden.end());
  std::vector<int> critic_sizes = actor_sizes;
  actor_sizes.push_back(action_logits(pool_size));
  critic_sizes.push_back(1);
  p.actor = Mlp(actor_sizes);
  p.critic = Mlp(critic_sizes);
  Rng rng(Rng::mix(seed, 0xA11CE));
  p.actor.init_orthogonal(rng, 0.01);
  p.critic.init_orthogonal(rng, 1.0);
  return p;
}

ActResult act(const PolicyParams& params, std::span<const float> features, const ActionMask& mask, ActMode mode,
              Rng& rng) {
  const Eigen::Map<const Eigen::VectorXf> x(features.data(), static_cast<Eigen::Index>(features.size()));
  ActResult out;
  out.value = params.critic.forward(x)(0, 0);
  if (!mask.any()) return out;
  const Eigen::MatrixXf logits = params.actor.forward(x);
  out.choice = select_action(logits.data(), mask, mode, rng);
  out.log_prob = choice_log_prob<float>(logits.data(), view_for(mask, out.choice), out.choice).first;
  return out;
}

Optimizers Optimizers::for_params(const PolicyParams& p, double lr) {
  Adam::Options o;
  o.lr = lr;
  return {Adam(p.actor.num_params(), o), Adam(p.critic.num_params(), o)};
}

LossStats ppo_update(PolicyParams& params, Optimizers& opt, const Batch& batch, const PpoConfig& cfg, Rng& rng) {
  LossStats stats;
  const std::size_t n = batch.size();
  if (n == 0) return stats;
  const std::size_t mb = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.minibatch));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<ActorSample> samples;
  std::vector<double> returns;
  Eigen::MatrixXf x;
  Eigen::VectorXf g_actor;
  Eigen::VectorXf g_critic;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
    for (std::size_t start = 0; start < n; start += mb) {
      const std::size_t end = std::min(n, start + mb);
      const auto cols = static_cast<Eigen::Index>(end - start);
      x.resize(batch.features.rows(), cols);
      samples.clear();
      returns.clear();
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        x.col(static_cast<Eigen::Index>(k - start)) = batch.features.col(static_cast<Eigen::Index>(i));
        samples.push_back({&batch.choices[i], batch.mask(i), batch.old_log_prob[i], batch.advantages[i]});
        returns.push_back(batch.returns[i]);
      }

      g_actor = Eigen::VectorXf::Zero(params.actor.num_params());
      const auto a = actor_loss<float>(params.actor, x, samples, cfg.clip, cfg.entropy_coef, &g_actor);
      g_critic = Eigen::VectorXf::Zero(params.critic.num_params());
      const float v = critic_loss<float>(params.critic, x, returns, cfg.value_coef, &g_critic);

      if (!std::isfinite(a.loss) || !std::isfinite(v) || !g_actor.allFinite() || !g_critic.allFinite()) {
        std::ostringstream os;
        os << "ppo_update: non-finite loss at epoch " << epoch << ", minibatch starting " << start
           << " (actor loss " << a.loss << ", critic loss " << v << ", entropy " << a.entropy << ", kl "
           << a.approx_kl << ")";
        throw std::runtime_error(os.str());
      }
      clip_grad_norm(g_actor, cfg.max_grad_norm);
      clip_grad_norm(g_critic, cfg.max_grad_norm);
      opt.actor.step(params.actor.params(), g_actor);
      opt.critic.step(params.critic.params(), g_critic);

      stats.policy_loss += a.loss;
      stats.value_loss += v;
      stats.entropy += a.entropy;
      stats.approx_kl += a.approx_kl;
      stats.clip_fraction += a.clip_fraction;
      ++stats.minibatches;
    }
  }
  const double k = static_cast<double>(stats.minibatches);
  stats.policy_loss /= k;
  stats.value_loss /= k;
  stats.entropy /= k;
  stats.approx_kl /= k;
  stats.clip_fraction /= k;
  return stats;
}

}  // namespace qoeslice::rl

#include "qoeslice/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

#include "qoeslice/common/errors.hpp"
#include "qoeslice/env/request_generator.hpp"
#include "qoeslice/qoe/qoe_model.hpp"
#include "qoeslice/rl/features.hpp"
#include "qoeslice/rl/gae.hpp"

namespace qoeslice::rl {

using nlohmann::json;

bool AlgoConfig::operator==(const AlgoConfig& o) const {
  return ppo.clip == o.ppo.clip && ppo.lr == o.ppo.lr && ppo.epochs == o.ppo.epochs &&
         ppo.minibatch == o.ppo.minibatch && ppo.entropy_coef == o.ppo.entropy_coef &&
         ppo.value_coef == o.ppo.value_coef && ppo.max_grad_norm == o.ppo.max_grad_norm && gamma == o.gamma &&
         gae_lambda == o.gae_lambda && horizon == o.horizon && hidden == o.hidden &&
         total_steps == o.total_steps && episode_requests == o.episode_requests;
}

void to_json(json& j, const AlgoConfig& c) {
  j = json{{"lr", c.ppo.lr},
           {"gamma", c.gamma},
           {"gae_lambda", c.gae_lambda},
           {"clip", c.ppo.clip},
           {"epochs", c.ppo.epochs},
           {"minibatch", c.ppo.minibatch},
           {"horizon", c.horizon},
           {"entropy_coef", c.ppo.entropy_coef},
           {"value_coef", c.ppo.value_coef},
           {"max_grad_norm", c.ppo.max_grad_norm},
           {"hidden", c.hidden},
           {"total_steps", c.total_steps},
           {"episode_requests", json::array({c.episode_requests.min, c.episode_requests.max})}};
}

void from_json(const json& j, AlgoConfig& c) {
  if (!j.is_object()) throw ConfigError("algo config must be an object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "lr") c.ppo.lr = v.get<double>();
      else if (k == "gamma") c.gamma = v.get<double>();
      else if (k == "gae_lambda") c.gae_lambda = v.get<double>();
      else if (k == "clip") c.ppo.clip = v.get<double>();
      else if (k == "epochs") c.ppo.epochs = v.get<int>();
      else if (k == "minibatch") c.ppo.minibatch = v.get<int>();
      else if (k == "horizon") c.horizon = v.get<int>();
      else if (k == "entropy_coef") c.ppo.entropy_coef = v.get<double>();
      else if (k == "value_coef") c.ppo.value_coef = v.get<double>();
      else if (k == "max_grad_norm") c.ppo.max_grad_norm = v.get<double>();
      else if (k == "hidden") c.hidden = v.get<std::vector<int>>();
      else if (k == "total_steps") c.total_steps = v.get<std::size_t>();
      else if (k == "episode_requests") c.episode_requests = {v.at(0).get<int>(), v.at(1).get<int>()};
      else throw ConfigError("unknown algo config key: " + k);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed algo config: ") + e.what());
  }
  if (c.horizon < 1 || c.ppo.minibatch < 1 || c.ppo.epochs < 0 || c.episode_requests.min < 1 ||
      !c.episode_requests.valid() || c.ppo.lr <= 0.0) {
    throw ConfigError("algo config out of range");
  }
}

EpisodeSpec make_episode(const env::EnvConfig& cfg, int n_requests, std::uint64_t seed, std::uint64_t episode) {
  const std::uint64_t s = Rng::mix(seed, episode);
  return {env::generate_requests(n_requests, Rng::mix(s, 1), cfg.class_mix, cfg), Rng::mix(s, 2)};
}

namespace {

// Walks an endless sequence of episodes, one request at a time.
class EpisodeStream {
 public:
  EpisodeStream(const env::SlicingEnv& env, const AlgoConfig& algo, Variant variant, qoe::PreferenceSource* intents,
                std::uint64_t seed)
      : env_(env), algo_(algo), variant_(variant), intents_(intents), seed_(seed), length_rng_(Rng::mix(seed, 77)) {
    begin();
  }

  const env::NetworkState& state() const { return state_; }
  const env::SliceRequest& request() const { return spec_.requests[index_]; }
  const qoe::PreferenceVector& reward_prefs() const { return reward_prefs_[index_]; }
  const qoe::PreferenceVector& feature_prefs() const {
    static const qoe::PreferenceVector kZero = qoe::PreferenceVector::zero();
    return variant_ == Variant::QAPPO ? reward_prefs_[index_] : kZero;
  }

  // Applies the action and returns (reward, episode finished).
  std::pair<double, bool> step(const env::DeploymentAction& action) {
    const double penalty = env_.config().violation_penalty;
    env::StepResult r = env_.apply(std::move(state_), request(), action);
    const double reward = -policy::step_cost(env_, r, reward_prefs()).total(penalty);
    state_ = std::move(r.state);
    episode_return_ += reward;
    if (++index_ < spec_.requests.size()) return {reward, false};
    finished_returns_.push_back(episode_return_);
    begin();
    return {reward, true};
  }

  std::vector<double> take_finished_returns() { return std::exchange(finished_returns_, {}); }

 private:
  void begin() {
    const int n = static_cast<int>(length_rng_.uniform_int(algo_.episode_requests.min, algo_.episode_requests.max));
    spec_ = make_episode(env_.config(), n, seed_, episode_++);
    state_ = env_.reset(spec_.env_seed);
    reward_prefs_.clear();
    for (const auto& r : spec_.requests) {
      reward_prefs_.push_back(variant_ == Variant::QAPPO ? intents_->preferences(r) : qoe::PreferenceVector::equal());
    }
    index_ = 0;
    episode_return_ = 0.0;
  }

  const env::SlicingEnv& env_;
  const AlgoConfig& algo_;
  Variant variant_;
  qoe::PreferenceSource* intents_;
  std::uint64_t seed_;
  Rng length_rng_;
  std::uint64_t episode_ = 0;
  EpisodeSpec spec_;
  env::NetworkState state_;
  std::vector<qoe::PreferenceVector> reward_prefs_;
  std::size_t index_ = 0;
  double episode_return_ = 0.0;
  std::vector<double> finished_returns_;
};

// Running mean and variance of value targets (parallel Welford merge). The
// critic learns standardised returns; GAE works in raw reward units.
class ReturnScale {
 public:
  double mean() const { return mean_; }
  double std() const { return count_ > 1.0 ? std::max(std::sqrt(m2_ / count_), 1e-4) : 1.0; }

  void update(std::span<const double> xs) {
    if (xs.empty()) return;
    double b_mean = 0.0;
    for (double x : xs) b_mean += x;
    const auto b_count = static_cast<double>(xs.size());
    b_mean /= b_count;
    double b_m2 = 0.0;
    for (double x : xs) b_m2 += (x - b_mean) * (x - b_mean);
    const double total = count_ + b_count;
    const double delta = b_mean - mean_;
    mean_ += delta * b_count / total;
    m2_ += b_m2 + delta * delta * count_ * b_count / total;
    count_ = total;
  }

 private:
  double mean_ = 0.0;
  double m2_ = 0.0;
  double count_ = 0.0;
};

}  // namespace

TrainResult train(const env::EnvConfig& env_cfg, const AlgoConfig& algo, Variant variant,
                  qoe::PreferenceSource* intents, std::size_t total_steps, std::uint64_t seed,
                  const std::function<void(const CurvePoint&)>& on_progress) {
  if (variant == Variant::QAPPO && intents == nullptr) {
    throw std::invalid_argument("train: QAPPO needs a preference source");
  }
  const env::SlicingEnv env(env_cfg);
  TrainResult result;
  result.params = init_params(env_cfg.pool_size, algo.hidden, variant, seed);
  if (total_steps == 0) return result;

  PolicyParams& params = result.params;
  Optimizers opt = Optimizers::for_params(params, algo.ppo.lr);
  Rng act_rng(Rng::mix(seed, 0xAC7));
  Rng shuffle_rng(Rng::mix(seed, 0x5F1));
  EpisodeStream stream(env, algo, variant, intents, seed);
  ReturnScale scale;

  const int pool = env_cfg.pool_size;
  const auto fdim = static_cast<Eigen::Index>(feature_dim(pool));
  std::vector<float> feat(static_cast<std::size_t>(fdim));

  std::size_t steps_done = 0;
  while (steps_done < total_steps) {
    const std::size_t horizon = std::min<std::size_t>(static_cast<std::size_t>(algo.horizon), total_steps - steps_done);
    std::vector<double> rewards(horizon), values(horizon + 1);
    std::vector<std::uint8_t> dones(horizon);
    std::vector<std::size_t> trainable;  // rollout indices with a real action

    Batch batch;
    batch.pool_size = pool;
    Eigen::MatrixXf all_features(fdim, static_cast<Eigen::Index>(horizon));
    std::vector<ActionMask> masks;
    std::vector<ActResult> acts;
    masks.reserve(horizon);
    acts.reserve(horizon);

    for (std::size_t t = 0; t < horizon; ++t) {
      encode_state_into(stream.state(), stream.request(), stream.feature_prefs(), env_cfg, feat.data());
      all_features.col(static_cast<Eigen::Index>(t)) = Eigen::Map<const Eigen::VectorXf>(feat.data(), fdim);
      ActionMask mask = build_mask(env, stream.state(), stream.request());
      ActResult a = act(params, feat, mask, ActMode::Sample, act_rng);
      const auto [reward, done] = stream.step(to_deployment(a.choice, mask));
      rewards[t] = reward;
      dones[t] = done ? 1 : 0;
      values[t] = scale.mean() + scale.std() * a.value;
      if (!a.choice.is_infeasible()) trainable.push_back(t);
      masks.push_back(std::move(mask));
      acts.push_back(std::move(a));
    }
    if (dones[horizon - 1]) {
      values[horizon] = 0.0;
    } else {
      encode_state_into(stream.state(), stream.request(), stream.feature_prefs(), env_cfg, feat.data());
      const float v = params.critic.forward(Eigen::Map<const Eigen::VectorXf>(feat.data(), fdim))(0, 0);
      values[horizon] = scale.mean() + scale.std() * v;
    }
    steps_done += horizon;

    GaeResult g = gae(rewards, values, dones, algo.gamma, algo.gae_lambda);

    batch.features.resize(fdim, static_cast<Eigen::Index>(trainable.size()));
    for (std::size_t k = 0; k < trainable.size(); ++k) {
      const std::size_t t = trainable[k];
      batch.features.col(static_cast<Eigen::Index>(k)) = all_features.col(static_cast<Eigen::Index>(t));
      const ActResult& a = acts[t];
      const ActionMask& m = masks[t];
      batch.choices.push_back(a.choice);
      batch.mode_ok.push_back(m.mode_ok);
      const auto& flags = m.node_ok[static_cast<std::size_t>(a.choice.mode)];
      batch.node_ok.insert(batch.node_ok.end(), flags.begin(), flags.end());
      batch.chain_length.push_back(m.chain_length);
      batch.old_log_prob.push_back(a.log_prob);
      batch.advantages.push_back(g.advantages[t]);
      batch.returns.push_back(g.returns[t]);
    }
    normalize_advantages(batch.advantages);
    scale.update(batch.returns);
    for (double& r : batch.returns) r = (r - scale.mean()) / scale.std();
    if (batch.size() > 0) result.updates.push_back(ppo_update(params, opt, batch, algo.ppo, shuffle_rng));

    const auto finished = stream.take_finished_returns();
    if (!finished.empty()) {
      double mean = 0.0;
      for (double r : finished) mean += r;
      mean /= static_cast<double>(finished.size());
      result.curve.push_back({steps_done, mean});
      if (on_progress) on_progress(result.curve.back());
    }
  }
  return result;
}

RlPolicy::RlPolicy(PolicyParams params, ActMode mode, std::uint64_t seed)
    : params_(std::move(params)), mode_(mode), rng_(seed) {
  features_.resize(static_cast<std::size_t>(params_.feature_dim()));
}

env::DeploymentAction RlPolicy::choose(const env::SlicingEnv& env, const env::NetworkState& state,
                                       const env::SliceRequest& request, const qoe::PreferenceVector& prefs) {
  if (static_cast<int>(state.nodes.size()) != params_.pool_size) {
    throw ContractViolation("RlPolicy: checkpoint was trained for a pool of " + std::to_string(params_.pool_size) +
                            " nodes");
  }
  const qoe::PreferenceVector seen = params_.variant == Variant::QAPPO ? prefs : qoe::PreferenceVector::zero();
  encode_state_into(state, request, seen, env.config(), features_.data());
  const ActionMask mask = build_mask(env, state, request);
  const ActResult a = act(params_, features_, mask, mode_, rng_);
  return to_deployment(a.choice, mask);
}

EvalSummary evaluate(policy::Policy& policy, const env::SlicingEnv& env, int n_requests, qoe::PreferenceSource& prefs,
                     int episodes, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be at least 1");
  if (n_requests < 1) throw std::invalid_argument("evaluate: n_requests must be at least 1");
  EvalSummary s;
  std::size_t served = 0;
  const std::uint64_t eval_seed = Rng::mix(seed, 0xE7A1 + static_cast<std::uint64_t>(n_requests));
  for (int e = 0; e < episodes; ++e) {
    const EpisodeSpec spec = make_episode(env.config(), n_requests, eval_seed, static_cast<std::uint64_t>(e));
    std::vector<qoe::PreferenceVector> p;
    p.reserve(spec.requests.size());
    for (const auto& r : spec.requests) p.push_back(prefs.preferences(r));
    const auto result = policy::run_episode(
        env, env.reset(spec.env_seed), spec.requests, p,
        [&](const env::NetworkState& st, const env::SliceRequest& r, const qoe::PreferenceVector& pv) {
          return policy.choose(env, st, r, pv);
        });
    for (const auto& o : result.outcomes) {
      s.mean_latency_ms += o.latency_ms;
      s.mean_cost += o.econ_cost;
      s.mean_reliability_cost += o.reliability_cost;
      if (o.served()) ++served;
    }
    s.mean_weighted_cost += result.total_cost;
    s.slices += result.outcomes.size();
  }
  const double n = static_cast<double>(s.slices);
  s.mean_latency_ms /= n;
  s.mean_cost /= n;
  s.mean_reliability_cost /= n;
  s.mean_weighted_cost /= n;
  s.availability = static_cast<double>(served) / n;
  s.episodes = static_cast<std::size_t>(episodes);
  return s;
}

}  // namespace qoeslice::rl

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qoeslice/common/rng.hpp"
#include "qoeslice/env/slicing_env.hpp"

namespace qoeslice::rl {

// Factorised action: a placement mode, then chain_length sequential node
// picks without replacement. The actor emits 3 mode logits followed by one
// logit per pool node; masking restricts nodes to the mode's host and to
// those with share capacity left.
inline constexpr int kModeLogits = 3;
constexpr int action_logits(int pool_size) { return kModeLogits + pool_size; }

struct ActionMask {
  std::array<bool, kModeLogits> mode_ok{};
  std::array<std::vector<std::uint8_t>, kModeLogits> node_ok;  // per mode, one flag per node
  int chain_length = 0;
  std::optional<int> vertical_container;

  bool any() const { return mode_ok[0] || mode_ok[1] || mode_ok[2]; }
};

ActionMask build_mask(const env::SlicingEnv& env, const env::NetworkState& state, const env::SliceRequest& request);

struct ActionChoice {
  int mode = -1;  // -1 encodes the infeasible sentinel
  std::vector<int> nodes;

  bool is_infeasible() const { return mode < 0; }
  bool operator==(const ActionChoice&) const = default;
};

env::DeploymentAction to_deployment(const ActionChoice& choice, const ActionMask& mask);

// Non-owning view of the part of a mask needed to score one chosen action.
struct ChoiceMaskView {
  std::array<bool, kModeLogits> mode_ok{};
  const std::uint8_t* node_ok = nullptr;  // flags for the chosen mode
  int pool_size = 0;
  int chain_length = 0;
};

namespace detail {

// One masked categorical factor over `candidates`. Adds
// d(lp_coef * log p[chosen] + ent_coef * H)/dz into grad when grad != nullptr.
template <typename Scalar>
std::pair<Scalar, Scalar> masked_factor(const Scalar* z, const std::vector<int>& candidates, int chosen,
                                        Scalar lp_coef, Scalar ent_coef, Scalar* grad) {
  Scalar zmax = -std::numeric_limits<Scalar>::infinity();
  for (int c : candidates) zmax = std::max(zmax, z[c]);
  Scalar total = 0;
  for (int c : candidates) total += std::exp(z[c] - zmax);
  const Scalar log_total = std::log(total);
  Scalar entropy = 0;
  Scalar log_p_chosen = 0;
  for (int c : candidates) {
    const Scalar lp = z[c] - zmax - log_total;
    entropy -= std::exp(lp) * lp;
    if (c == chosen) log_p_chosen = lp;
  }
  if (grad) {
    for (int c : candidates) {
      const Scalar lp = z[c] - zmax - log_total;
      const Scalar p = std::exp(lp);
      const Scalar d_logp = (c == chosen ? Scalar(1) : Scalar(0)) - p;
      const Scalar d_ent = -p * (lp + entropy);
      grad[c] += lp_coef * d_logp + ent_coef * d_ent;
    }
  }
  return {log_p_chosen, entropy};
}

}  // namespace detail

// Log-probability and summed per-factor entropy of `choice`. Node picks that
// are forced (as many eligible nodes left as picks still needed) carry no
// probability mass decision and contribute zero to both.
template <typename Scalar>
std::pair<Scalar, Scalar> choice_log_prob(const Scalar* logits, const ChoiceMaskView& mask, const ActionChoice& choice,
                                          Scalar lp_coef = 0, Scalar ent_coef = 0, Scalar* grad = nullptr) {
  std::vector<int> modes;
  for (int m = 0; m < kModeLogits; ++m) {
    if (mask.mode_ok[static_cast<std::size_t>(m)]) modes.push_back(m);
  }
  auto [log_p, entropy] = detail::masked_factor(logits, modes, choice.mode, lp_coef, ent_coef, grad);

  const Scalar* node_z = logits + kModeLogits;
  Scalar* node_grad = grad ? grad + kModeLogits : nullptr;
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(mask.pool_size), 0);
  std::vector<int> candidates;
  for (int j = 0; j < mask.chain_length; ++j) {
    candidates.clear();
    for (int n = 0; n < mask.pool_size; ++n) {
      if (mask.node_ok[n] && !taken[static_cast<std::size_t>(n)]) candidates.push_back(n);
    }
    if (static_cast<int>(candidates.size()) <= mask.chain_length - j) break;
    const int chosen = choice.nodes[static_cast<std::size_t>(j)];
    auto [lp, h] = detail::masked_factor(node_z, candidates, chosen, lp_coef, ent_coef, node_grad);
    log_p += lp;
    entropy += h;
    taken[static_cast<std::size_t>(chosen)] = 1;
  }
  return {log_p, entropy};
}

enum class ActMode { Sample, Greedy };

// Draws (or takes the argmax of) each factor in turn. Returns the sentinel
// when the mask admits no action.
ActionChoice select_action(const float* logits, const ActionMask& mask, ActMode mode, Rng& rng);

ChoiceMaskView view_for(const ActionMask& mask, const ActionChoice& choice);

}  // namespace qoeslice::rl

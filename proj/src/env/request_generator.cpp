#include "qoeslice/env/request_generator.hpp"

#include <cmath>
#include <stdexcept>

#include "qoeslice/common/rng.hpp"

namespace qoeslice::env {

std::vector<SliceRequest> generate_requests(int n, std::uint64_t seed, const ClassMix& mix,
                                            const EnvConfig& cfg, const IntentTemplates& templates) {
  if (n < 0) throw std::invalid_argument("generate_requests: n must be non-negative");
  double total = 0.0;
  for (double p : mix.p) {
    if (p < 0.0) throw std::invalid_argument("generate_requests: negative class probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("generate_requests: class_mix must sum to 1");
  }

  Rng rng(seed);
  std::vector<SliceRequest> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    std::size_t k = 0;
    double acc = mix.p[0];
    while (k + 1 < kNumClasses && u >= acc) acc += mix.p[++k];
    // Skip zero-probability classes that a rounding tail could land on.
    while (mix.p[k] == 0.0 && k > 0) --k;

    const QoEClass& cls = cfg.classes[k];
    SliceRequest r;
    r.id = SliceId{static_cast<std::uint64_t>(i) + 1};
    r.qoe_class = cls.id;
    r.cpu = static_cast<int>(rng.uniform_int(cls.cpu_demand.min, cls.cpu_demand.max));
    r.mem = static_cast<int>(rng.uniform_int(cls.mem_demand.min, cls.mem_demand.max));
    r.chain_length = static_cast<int>(rng.uniform_int(cls.chain_length.min, cls.chain_length.max));
    const auto& texts = templates[cls.id];
    r.intent_text = texts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(texts.size()) - 1))];
    r.arrival_index = static_cast<std::size_t>(i);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qoeslice::env

#pragma once

#include <cstdint>
#include <vector>

#include "qoeslice/env/config.hpp"
#include "qoeslice/env/intent_templates.hpp"
#include "qoeslice/env/types.hpp"

namespace qoeslice::env {

// Draws n slice requests: class from `mix`, demands and chain length uniformly
// within the class ranges, intent text uniformly from that class's templates.
// Slice ids are 1..n in arrival order. Throws std::invalid_argument for n < 0
// or a mix that is not a probability vector.
std::vector<SliceRequest> generate_requests(int n, std::uint64_t seed, const ClassMix& mix,
                                            const EnvConfig& cfg,
                                            const IntentTemplates& templates = default_intent_templates());

}  // namespace qoeslice::env

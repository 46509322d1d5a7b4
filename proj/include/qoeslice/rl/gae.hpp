#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qoeslice::rl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// Generalised advantage estimation. `values` carries one entry per step plus
// a trailing bootstrap value for the state after the last step; the bootstrap
// is ignored when that step is terminal. Throws std::invalid_argument on a
// length mismatch.
GaeResult gae(std::span<const double> rewards, std::span<const double> values, std::span<const std::uint8_t> dones,
              double gamma, double lambda);

// Shifts and scales to zero mean and unit variance (population variance).
// Leaves singleton or constant inputs centred but unscaled.
void normalize_advantages(std::span<double> advantages);

}  // namespace qoeslice::rl

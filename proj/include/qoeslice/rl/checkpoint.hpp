#pragma once

#include <iosfwd>
#include <string>

#include "qoeslice/rl/ppo.hpp"

namespace qoeslice::rl {

// Binary policy checkpoint, little-endian throughout:
//   "QSCK" | u32 format version | u32 params version | u8 variant | u64 seed
//   | u32 pool_size | u32 feature_dim
//   | per network (actor, then critic): u32 layer count, u32 sizes..., u64 n, f32[n]
inline constexpr std::uint32_t kCheckpointFormat = 1;

void write_checkpoint(std::ostream& out, const PolicyParams& params);
PolicyParams read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const PolicyParams& params);
// Throws NotFoundError for a missing file and LoadError for a corrupt one.
PolicyParams load_checkpoint(const std::string& path);

}  // namespace qoeslice::rl

#include "qoeslice/rl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "qoeslice/common/errors.hpp"
#include "qoeslice/rl/features.hpp"

namespace qoeslice::rl {

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'C', 'K'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>(u & 0xFF));
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
T get(std::istream& in, const char* what) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw LoadError(std::string("checkpoint truncated while reading ") + what, 0);
    u = static_cast<U>(u | (static_cast<U>(static_cast<unsigned char>(c)) << (8 * i)));
  }
  return static_cast<T>(u);
}

void put_net(std::ostream& out, const Mlp& net) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.sizes().size()));
  for (int s : net.sizes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(net.num_params()));
  for (Eigen::Index i = 0; i < net.num_params(); ++i) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(net.params()[i]));
}

Mlp get_net(std::istream& in) {
  const auto layers = get<std::uint32_t>(in, "layer count");
  if (layers < 2 || layers > 64) throw LoadError("checkpoint has an implausible layer count", 0);
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < layers; ++i) {
    const auto s = get<std::uint32_t>(in, "layer size");
    if (s == 0 || s > (1u << 20)) throw LoadError("checkpoint has an implausible layer size", 0);
    sizes.push_back(static_cast<int>(s));
  }
  Mlp net(sizes);
  const auto n = get<std::uint64_t>(in, "parameter count");
  if (n != static_cast<std::uint64_t>(net.num_params())) throw LoadError("checkpoint parameter count does not match its shapes", 0);
  for (Eigen::Index i = 0; i < net.num_params(); ++i) {
    const float v = std::bit_cast<float>(get<std::uint32_t>(in, "parameters"));
    if (!std::isfinite(v)) throw LoadError("checkpoint contains a non-finite parameter", 0);
    net.params()[i] = v;
  }
  return net;
}

}  // namespace

void write_checkpoint(std::ostream& out, const PolicyParams& p) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kCheckpointFormat);
  put<std::uint32_t>(out, p.version);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(p.variant));
  put<std::uint64_t>(out, p.seed);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.pool_size));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.feature_dim()));
  put_net(out, p.actor);
  put_net(out, p.critic);
}

PolicyParams read_checkpoint(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) throw LoadError("not a policy checkpoint", 0);
  const auto format = get<std::uint32_t>(in, "format version");
  if (format != kCheckpointFormat) {
    throw LoadError("unsupported checkpoint format version " + std::to_string(format), 0);
  }
  PolicyParams p;
  p.version = get<std::uint32_t>(in, "params version");
  const auto variant = get<std::uint8_t>(in, "variant");
  if (variant > 1) throw LoadError("unknown variant tag in checkpoint", 0);
  p.variant = static_cast<Variant>(variant);
  p.seed = get<std::uint64_t>(in, "seed");
  p.pool_size = static_cast<int>(get<std::uint32_t>(in, "pool size"));
  const auto fdim = static_cast<int>(get<std::uint32_t>(in, "feature dim"));
  p.actor = get_net(in);
  p.critic = get_net(in);
  if (fdim != feature_dim(p.pool_size) || p.actor.input_size() != fdim || p.critic.input_size() != fdim ||
      p.actor.output_size() != action_logits(p.pool_size) || p.critic.output_size() != 1) {
    throw LoadError("checkpoint network shapes are inconsistent with its pool size", 0);
  }
  return p;
}

void save_checkpoint(const std::string& path, const PolicyParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NotFoundError("cannot write checkpoint: " + path);
  write_checkpoint(out, params);
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

PolicyParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("missing checkpoint: " + path);
  return read_checkpoint(in);
}

}  // namespace qoeslice::rl

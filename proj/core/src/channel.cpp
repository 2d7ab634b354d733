#include "ehrelay/channel.hpp"

#include <limits>
#include <stdexcept>

namespace ehrelay {

double exp_cdf(double x, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exp_cdf: mean must be > 0");
  if (x <= 0.0) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  return -std::expm1(-x / mean);
}

double exp_survival(double x, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exp_survival: mean must be > 0");
  if (x <= 0.0) return 1.0;
  return std::exp(-x / mean);  // exp(-inf) = 0
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ChannelDraw sample_channels(const SystemParams& params, Rng& rng) {
  ChannelDraw draw;
  sample_channels(params, rng, draw);
  return draw;
}

void sample_channels(const SystemParams& params, Rng& rng, ChannelDraw& out) {
  const auto n = static_cast<std::size_t>(params.n_relays);
  out.g.resize(n);
  out.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.g[i] = rng.exponential(params.mean_g[i]);
  for (std::size_t i = 0; i < n; ++i) out.h[i] = rng.exponential(params.mean_h[i]);
}

}  // namespace ehrelay

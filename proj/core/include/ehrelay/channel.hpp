#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ehrelay/params.hpp"

namespace ehrelay {

/// CDF of an exponential distribution with the given mean, defined on
/// [0, +inf] with exp_cdf(+inf) = 1. Throws std::invalid_argument for
/// mean <= 0.
double exp_cdf(double x, double mean);

/// 1 - exp_cdf(x, mean), accurate in the tail.
double exp_survival(double x, double mean);

/// Deterministic seeded random stream. Uniforms take the top 53 bits of a
/// mt19937_64 word and variates are produced by inverse-CDF transform, so a
/// seed fixes the entire draw sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean (mean > 0), in [0, +inf).
  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  /// Uniform index in [0, n), n >= 1.
  int uniform_index(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<unsigned __int128>(n)) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream index into an independent-looking seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// One slot's realized channel gain powers for all relays.
struct ChannelDraw {
  std::vector<double> g;  // source->relay
  std::vector<double> h;  // relay->destination
};

/// Draws g[i] ~ Exp(mean_g[i]) then h[i] ~ Exp(mean_h[i]), all independent.
ChannelDraw sample_channels(const SystemParams& params, Rng& rng);

/// Allocation-free variant; `out` is resized to match params.
void sample_channels(const SystemParams& params, Rng& rng, ChannelDraw& out);

}  // namespace ehrelay

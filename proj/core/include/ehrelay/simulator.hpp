#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ehrelay/channel.hpp"
#include "ehrelay/selection.hpp"

namespace ehrelay {

struct SimConfig {
  SystemParams params;
  Policy policy = Policy::Bars;
  std::int64_t slots = 1'000'000;
  std::int64_t warmup_slots = 0;
  std::uint64_t seed = 1;
  int initial_level = -1;  // -1 means full (L+1)

  void validate() const;  // throws std::invalid_argument
};

/// Outage probability point estimate. The interval is a 99%
/// normal-approximation band on the post-warmup slot mean; slot indicators
/// are Markov-dependent, so treat it as approximate.
struct OutageEstimate {
  double p_out = 0.0;
  double std_err = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t counted_slots = 0;
  std::uint64_t seed = 0;
};

/// Weighted (by counted_slots) average of independent estimates.
OutageEstimate merge_estimates(const std::vector<OutageEstimate>& parts);

struct StepResult {
  std::vector<int> levels;
  bool outage = false;
};

/// One slot: select per policy, discharge the forwarder by T/h, charge every
/// harvester by P*g*kappa. rng is consumed only by Policy::Random.
StepResult step(const std::vector<int>& levels, const ChannelDraw& draw,
                Policy policy, const SystemParams& params, Rng* rng = nullptr);

/// Slot-by-slot trajectory from `initial_level` batteries; outage fraction
/// over the post-warmup slots. Deterministic for a fixed seed. When
/// `occupancy` is non-null it receives post-warmup joint-state visit counts
/// (size (L+2)^N, mixed-radix with relay 0 most significant).
OutageEstimate run(const SimConfig& config,
                   std::vector<std::int64_t>* occupancy = nullptr);

enum class SweepAxis { SnrDb, Kappa, Alpha, Levels, NRelays, Rate, PolicyAxis };

SweepAxis sweep_axis_from_name(std::string_view name);
std::string_view sweep_axis_name(SweepAxis axis);

/// Returns `base` with one axis value applied. Numeric axes parse the value
/// string; snr_db rewrites source_power against the configured noise power;
/// n_relays requires uniform channel means. Throws std::invalid_argument on
/// a malformed value.
SimConfig with_axis_value(SimConfig base, SweepAxis axis, const std::string& value);

/// One estimate per value; point seeds derive from the base seed and the
/// axis index. Points execute in parallel up to the EHRELAY_WORKERS cap;
/// results come back in sweep order.
std::vector<OutageEstimate> run_sweep(const SimConfig& base, SweepAxis axis,
                                      const std::vector<std::string>& values);

/// Worker cap: EHRELAY_WORKERS when set (>= 1), hardware concurrency
/// otherwise.
int worker_limit();

}  // namespace ehrelay

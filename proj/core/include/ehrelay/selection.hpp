#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrelay/battery.hpp"
#include "ehrelay/channel.hpp"
#include "ehrelay/params.hpp"

namespace ehrelay {

enum class Policy {
  Bars,       // min harvested energy over the forwarding set
  Csi,        // max relay->destination gain over the decoding set
  Benchmark,  // min harvested energy over the decoding set
  Random,     // uniform over the decoding set
};

Policy policy_from_name(std::string_view name);
std::string_view policy_name(Policy policy);

enum class Action : std::uint8_t { Forward, Harvest };

/// Per-slot plan: who forwards, who harvests, and whether the slot is an
/// outage. `selected` is set whenever the policy chose a relay, which for
/// CSI-style policies can still be an outage slot (chosen relay lacks
/// energy); the chosen relay then harvests like everyone else.
struct SlotOutcome {
  std::optional<int> selected;
  bool outage = false;
  std::vector<Action> actions;
};

/// Relays whose received SNR clears the decoding threshold.
std::vector<int> decoding_set(const ChannelDraw& draw, const SystemParams& params);

/// Decoding-set relays whose stored energy covers the required transmit
/// power; always a subset of decoding_set.
std::vector<int> forwarding_set(const ChannelDraw& draw,
                                const std::vector<int>& levels,
                                const SystemParams& params);

/// Allocation-free selection core shared by select() and the simulator.
/// relay = -1 when the policy chose nobody. rng is consumed only by
/// Policy::Random and may be null otherwise.
struct Selection {
  int relay = -1;
  bool outage = true;
};
Selection choose_relay(Policy policy, const ChannelDraw& draw,
                       const std::vector<int>& levels,
                       const LevelBoundaries& bounds,
                       const SystemParams& params, Rng* rng = nullptr);

/// Full per-slot action plan. Exactly one relay forwards on a non-outage
/// slot; all relays harvest on an outage slot. Ties break to the lowest
/// relay index.
SlotOutcome select(Policy policy, const ChannelDraw& draw,
                   const std::vector<int>& levels, const SystemParams& params,
                   Rng* rng = nullptr);

}  // namespace ehrelay

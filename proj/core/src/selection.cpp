#include "ehrelay/selection.hpp"

#include <stdexcept>

namespace ehrelay {

Policy policy_from_name(std::string_view name) {
  if (name == "bars") return Policy::Bars;
  if (name == "csi") return Policy::Csi;
  if (name == "benchmark") return Policy::Benchmark;
  if (name == "random") return Policy::Random;
  throw std::invalid_argument("policy: unknown name '" + std::string(name) +
                              "' (expected bars|csi|benchmark|random)");
}

std::string_view policy_name(Policy policy) {
  switch (policy) {
    case Policy::Bars: return "bars";
    case Policy::Csi: return "csi";
    case Policy::Benchmark: return "benchmark";
    case Policy::Random: return "random";
  }
  return "?";
}

std::vector<int> decoding_set(const ChannelDraw& draw, const SystemParams& params) {
  const double g_min = params.threshold() * params.noise_power / params.source_power;
  std::vector<int> set;
  for (int i = 0; i < params.n_relays; ++i)
    if (draw.g[static_cast<std::size_t>(i)] >= g_min) set.push_back(i);
  return set;
}

std::vector<int> forwarding_set(const ChannelDraw& draw,
                                const std::vector<int>& levels,
                                const SystemParams& params) {
  if (static_cast<int>(levels.size()) != params.n_relays)
    throw std::invalid_argument("levels: needs exactly n_relays entries");
  const LevelBoundaries bounds = LevelBoundaries::from_params(params);
  const double t = params.threshold();
  const double g_min = t * params.noise_power / params.source_power;
  std::vector<int> set;
  for (int i = 0; i < params.n_relays; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (draw.g[u] < g_min) continue;
    if (bounds.energy(levels[u]) < required_power(t, draw.h[u])) continue;
    set.push_back(i);
  }
  return set;
}

Selection choose_relay(Policy policy, const ChannelDraw& draw,
                       const std::vector<int>& levels,
                       const LevelBoundaries& bounds,
                       const SystemParams& params, Rng* rng) {
  const double t = params.threshold();
  const double g_min = t * params.noise_power / params.source_power;
  const int n = params.n_relays;

  if (policy == Policy::Bars) {
    // least harvested energy over the forwarding set; E_i = P g_i kappa is
    // monotone in g_i, so compare g directly (keeps a strict order at
    // kappa = 0 too)
    int best = -1;
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (draw.g[u] < g_min) continue;
      if (bounds.energy(levels[u]) < required_power(t, draw.h[u])) continue;
      if (best < 0 || draw.g[u] < draw.g[static_cast<std::size_t>(best)]) best = i;
    }
    return {best, best < 0};
  }

  int chosen = -1;
  if (policy == Policy::Random) {
    int eligible = 0;
    for (int i = 0; i < n; ++i) eligible += draw.g[static_cast<std::size_t>(i)] >= g_min;
    if (eligible > 0) {
      if (rng == nullptr)
        throw std::invalid_argument("policy: random selection needs a random stream");
      int k = rng->uniform_index(eligible);
      for (int i = 0; i < n; ++i)
        if (draw.g[static_cast<std::size_t>(i)] >= g_min && k-- == 0) {
          chosen = i;
          break;
        }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (draw.g[u] < g_min) continue;
      if (chosen < 0) {
        chosen = i;
        continue;
      }
      const auto c = static_cast<std::size_t>(chosen);
      const bool better =
          policy == Policy::Csi ? draw.h[u] > draw.h[c] : draw.g[u] < draw.g[c];
      if (better) chosen = i;
    }
  }
  if (chosen < 0) return {-1, true};
  // chosen on channel state alone; it may still lack the energy to transmit
  const auto c = static_cast<std::size_t>(chosen);
  const bool has_energy = bounds.energy(levels[c]) >= required_power(t, draw.h[c]);
  return {chosen, !has_energy};
}

SlotOutcome select(Policy policy, const ChannelDraw& draw,
                   const std::vector<int>& levels, const SystemParams& params,
                   Rng* rng) {
  if (static_cast<int>(levels.size()) != params.n_relays)
    throw std::invalid_argument("levels: needs exactly n_relays entries");
  const LevelBoundaries bounds = LevelBoundaries::from_params(params);
  const Selection core = choose_relay(policy, draw, levels, bounds, params, rng);
  SlotOutcome out;
  out.outage = core.outage;
  if (core.relay >= 0) out.selected = core.relay;
  out.actions.assign(static_cast<std::size_t>(params.n_relays), Action::Harvest);
  if (!core.outage) out.actions[static_cast<std::size_t>(core.relay)] = Action::Forward;
  return out;
}

}  // namespace ehrelay

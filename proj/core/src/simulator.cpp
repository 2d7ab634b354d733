#include "ehrelay/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "ehrelay/dtmc.hpp"
#include "parallel.hpp"

namespace ehrelay {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

OutageEstimate make_estimate(double p, std::int64_t counted, std::uint64_t seed) {
  OutageEstimate est;
  est.p_out = p;
  est.std_err = counted > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(counted)) : 0.0;
  est.ci_low = std::max(0.0, p - kZ99 * est.std_err);
  est.ci_high = std::min(1.0, p + kZ99 * est.std_err);
  est.counted_slots = counted;
  est.seed = seed;
  return est;
}

double parse_axis_double(const std::string& value, SweepAxis axis) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument(std::string(sweep_axis_name(axis)) +
                                ": malformed number '" + value + "'");
  return v;
}

int parse_axis_int(const std::string& value, SweepAxis axis) {
  int v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument(std::string(sweep_axis_name(axis)) +
                                ": malformed integer '" + value + "'");
  return v;
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (slots < 1) throw std::invalid_argument("slots: must be >= 1");
  if (warmup_slots < 0) throw std::invalid_argument("warmup_slots: must be >= 0");
  if (warmup_slots >= slots) throw std::invalid_argument("warmup_slots: must be < slots");
  if (initial_level != -1 && (initial_level < 0 || initial_level > params.levels + 1))
    throw std::invalid_argument("initial_level: out of range");
}

OutageEstimate merge_estimates(const std::vector<OutageEstimate>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge_estimates: empty input");
  double total = 0.0;
  for (const auto& e : parts) total += static_cast<double>(e.counted_slots);
  if (total <= 0.0) throw std::invalid_argument("merge_estimates: no counted slots");
  double p = 0.0;
  double var = 0.0;
  for (const auto& e : parts) {
    const double w = static_cast<double>(e.counted_slots) / total;
    p += w * e.p_out;
    var += w * w * e.std_err * e.std_err;
  }
  OutageEstimate merged;
  merged.p_out = p;
  merged.std_err = std::sqrt(var);
  merged.ci_low = std::max(0.0, p - kZ99 * merged.std_err);
  merged.ci_high = std::min(1.0, p + kZ99 * merged.std_err);
  merged.counted_slots = static_cast<std::int64_t>(total);
  merged.seed = parts.front().seed;
  return merged;
}

StepResult step(const std::vector<int>& levels, const ChannelDraw& draw,
                Policy policy, const SystemParams& params, Rng* rng) {
  if (static_cast<int>(levels.size()) != params.n_relays)
    throw std::invalid_argument("levels: needs exactly n_relays entries");
  const LevelBoundaries bounds = LevelBoundaries::from_params(params);
  const double t = params.threshold();
  const double harvest_per_gain = params.source_power * params.kappa;

  StepResult result;
  result.levels = levels;
  const Selection sel = choose_relay(policy, draw, levels, bounds, params, rng);
  result.outage = sel.outage;
  for (int i = 0; i < params.n_relays; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (!sel.outage && i == sel.relay)
      result.levels[u] = bounds.discharge(levels[u], required_power(t, draw.h[u]));
    else
      result.levels[u] = bounds.charge(levels[u], harvest_per_gain * draw.g[u]);
  }
  return result;
}

OutageEstimate run(const SimConfig& config, std::vector<std::int64_t>* occupancy) {
  config.validate();
  const SystemParams& prm = config.params;
  const int n = prm.n_relays;
  const LevelBoundaries bounds = LevelBoundaries::from_params(prm);
  const double t = prm.threshold();
  const double harvest_per_gain = prm.source_power * prm.kappa;

  std::vector<int> levels(static_cast<std::size_t>(n),
                          config.initial_level < 0 ? bounds.max_level() : config.initial_level);
  Rng rng(config.seed);
  ChannelDraw draw;
  draw.g.resize(static_cast<std::size_t>(n));
  draw.h.resize(static_cast<std::size_t>(n));

  JointStateCodec codec = JointStateCodec::from_params(prm);
  if (occupancy != nullptr) {
    const std::int64_t states = codec.state_count();
    if (states > kDefaultStateCap)
      throw std::invalid_argument("occupancy tracking needs (L+2)^N <= 65536 states");
    occupancy->assign(static_cast<std::size_t>(states), 0);
  }

  std::int64_t outages = 0;
  for (std::int64_t slot = 0; slot < config.slots; ++slot) {
    sample_channels(prm, rng, draw);
    const Selection sel = choose_relay(config.policy, draw, levels, bounds, prm, &rng);
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      if (!sel.outage && i == sel.relay)
        levels[u] = bounds.discharge(levels[u], required_power(t, draw.h[u]));
      else
        levels[u] = bounds.charge(levels[u], harvest_per_gain * draw.g[u]);
    }
    if (slot >= config.warmup_slots) {
      outages += sel.outage ? 1 : 0;
      if (occupancy != nullptr) ++(*occupancy)[static_cast<std::size_t>(codec.encode(levels))];
    }
  }

  const std::int64_t counted = config.slots - config.warmup_slots;
  return make_estimate(static_cast<double>(outages) / static_cast<double>(counted),
                       counted, config.seed);
}

SweepAxis sweep_axis_from_name(std::string_view name) {
  if (name == "snr_db") return SweepAxis::SnrDb;
  if (name == "kappa") return SweepAxis::Kappa;
  if (name == "alpha") return SweepAxis::Alpha;
  if (name == "levels") return SweepAxis::Levels;
  if (name == "n_relays") return SweepAxis::NRelays;
  if (name == "rate") return SweepAxis::Rate;
  if (name == "policy") return SweepAxis::PolicyAxis;
  throw std::invalid_argument(
      "sweep_axis: unknown name '" + std::string(name) +
      "' (expected snr_db|kappa|alpha|levels|n_relays|rate|policy)");
}

std::string_view sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SnrDb: return "snr_db";
    case SweepAxis::Kappa: return "kappa";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::Levels: return "levels";
    case SweepAxis::NRelays: return "n_relays";
    case SweepAxis::Rate: return "rate";
    case SweepAxis::PolicyAxis: return "policy";
  }
  return "?";
}

SimConfig with_axis_value(SimConfig base, SweepAxis axis, const std::string& value) {
  switch (axis) {
    case SweepAxis::SnrDb:
      base.params.source_power =
          snr_db_to_power(parse_axis_double(value, axis), base.params.noise_power);
      break;
    case SweepAxis::Kappa:
      base.params.kappa = parse_axis_double(value, axis);
      break;
    case SweepAxis::Alpha:
      base.params.alpha = parse_axis_double(value, axis);
      break;
    case SweepAxis::Rate:
      base.params.rate = parse_axis_double(value, axis);
      break;
    case SweepAxis::Levels:
      base.params.levels = parse_axis_int(value, axis);
      break;
    case SweepAxis::NRelays: {
      const int n = parse_axis_int(value, axis);
      auto resize_uniform = [n](std::vector<double>& means, const char* key) {
        for (double v : means)
          if (v != means.front())
            throw std::invalid_argument(std::string(key) +
                                        ": n_relays sweep requires uniform channel means");
        means.assign(static_cast<std::size_t>(std::max(n, 0)), means.front());
      };
      resize_uniform(base.params.mean_g, "mean_g");
      resize_uniform(base.params.mean_h, "mean_h");
      base.params.n_relays = n;
      break;
    }
    case SweepAxis::PolicyAxis:
      base.policy = policy_from_name(value);
      break;
  }
  return base;
}

std::vector<OutageEstimate> run_sweep(const SimConfig& base, SweepAxis axis,
                                      const std::vector<std::string>& values) {
  std::vector<SimConfig> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SimConfig point = with_axis_value(base, axis, values[i]);
    point.seed = derive_seed(base.seed, i);
    point.validate();  // reject bad values before spawning workers
    points.push_back(std::move(point));
  }
  std::vector<OutageEstimate> estimates(points.size());
  detail::parallel_for(static_cast<std::int64_t>(points.size()), worker_limit(),
                       [&](std::int64_t i) {
                         estimates[static_cast<std::size_t>(i)] =
                             run(points[static_cast<std::size_t>(i)]);
                       });
  return estimates;
}

int worker_limit() {
  if (const char* env = std::getenv("EHRELAY_WORKERS")) {
    int v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec == std::errc{} && ptr == end && v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace ehrelay

#include "ehrelay/modes.hpp"

#include <limits>
#include <stdexcept>

#include "ehrelay/channel.hpp"

namespace ehrelay {

double forwarding_gain_threshold(double threshold, double stored) {
  if (threshold <= 0.0) return 0.0;
  if (stored <= 0.0) return std::numeric_limits<double>::infinity();
  return threshold / stored;
}

namespace {

void check_indices(int level, int relay, const SystemParams& params) {
  if (level < 0 || level > params.levels + 1)
    throw std::out_of_range("battery level out of range");
  if (relay < 0 || relay >= params.n_relays)
    throw std::out_of_range("relay index out of range");
}

}  // namespace

double prob_forwarding(int level, int relay, const SystemParams& params) {
  check_indices(level, relay, params);
  const double t = params.threshold();
  const double stored =
      static_cast<double>(level) * params.battery_capacity() / (params.levels + 1);
  const double decode = exp_survival(t * params.noise_power / params.source_power,
                                     params.mean_g[static_cast<std::size_t>(relay)]);
  const double energy = exp_survival(forwarding_gain_threshold(t, stored),
                                     params.mean_h[static_cast<std::size_t>(relay)]);
  return decode * energy;
}

double prob_charging(int level, int relay, const SystemParams& params) {
  check_indices(level, relay, params);
  const double t = params.threshold();
  const double stored =
      static_cast<double>(level) * params.battery_capacity() / (params.levels + 1);
  const double fh = exp_cdf(forwarding_gain_threshold(t, stored),
                            params.mean_h[static_cast<std::size_t>(relay)]);
  const double fg = exp_cdf(t * params.noise_power / params.source_power,
                            params.mean_g[static_cast<std::size_t>(relay)]);
  return fh + (1.0 - fh) * fg;
}

}  // namespace ehrelay

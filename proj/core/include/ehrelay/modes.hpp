#pragma once

#include "ehrelay/params.hpp"

namespace ehrelay {

/// Threshold on the relay->destination gain h above which the stored energy
/// `stored` covers the required transmit power: stored >= T/h. Returns 0
/// when T = 0 and +infinity when stored = 0 with T > 0, so an empty battery
/// never forwards.
double forwarding_gain_threshold(double threshold, double stored);

/// Probability that the relay at quantized level m decodes the source and
/// holds enough energy to forward (the forwarding mode).
double prob_forwarding(int level, int relay, const SystemParams& params);

/// Complement of prob_forwarding (the charging mode); equals 1 at level 0.
double prob_charging(int level, int relay, const SystemParams& params);

}  // namespace ehrelay

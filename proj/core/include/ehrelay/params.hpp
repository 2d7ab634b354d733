#pragma once

#include <vector>

namespace ehrelay {

/// Decoding threshold for the two-hop half-duplex link at `rate` bits/sec/Hz,
/// T = 2^(2R) - 1. Throws std::invalid_argument for negative rate.
double decoding_threshold(double rate);

/// Source power in linear scale for a given SNR in dB over `noise_power`.
double snr_db_to_power(double snr_db, double noise_power);

/// Minimum relay transmit power for successful decoding at the destination,
/// T/h. A zero threshold needs no power; h = 0 with T > 0 yields +infinity.
double required_power(double threshold, double h);

/// Scenario constants. The slot duration is normalized to 1, so harvested
/// power and stored energy are numerically interchangeable.
struct SystemParams {
  int n_relays = 1;            // N
  int levels = 1;              // L, interior battery quantization levels
  double rate = 1.0;           // bits/sec/Hz
  double source_power = 10.0;  // linear scale
  double noise_power = 1.0;
  double kappa = 0.5;          // energy conversion efficiency, in [0,1]
  double alpha = 1.0;          // battery capacity in units of source power
  std::vector<double> mean_g;  // per-relay source->relay mean gain power
  std::vector<double> mean_h;  // per-relay relay->destination mean gain power

  double threshold() const { return decoding_threshold(rate); }
  double battery_capacity() const { return alpha * source_power; }
  double snr() const { return source_power / noise_power; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Identical relays with unit mean channel gains.
  static SystemParams symmetric(int n_relays, int levels, double rate,
                                double snr_db, double kappa, double alpha,
                                double noise_power = 1.0);
};

}  // namespace ehrelay

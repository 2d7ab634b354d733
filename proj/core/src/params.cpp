#include "ehrelay/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ehrelay {

double decoding_threshold(double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate: must be >= 0");
  return std::exp2(2.0 * rate) - 1.0;
}

double snr_db_to_power(double snr_db, double noise_power) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise: must be > 0");
  return noise_power * std::pow(10.0, snr_db / 10.0);
}

double required_power(double threshold, double h) {
  if (threshold <= 0.0) return 0.0;
  return threshold / h;  // h = 0 gives +inf
}

void SystemParams::validate() const {
  if (n_relays < 1) throw std::invalid_argument("n_relays: must be >= 1");
  if (levels < 1) throw std::invalid_argument("levels: must be >= 1");
  if (!(rate >= 0.0)) throw std::invalid_argument("rate: must be >= 0");
  if (!(source_power > 0.0)) throw std::invalid_argument("source_power: must be > 0");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise: must be > 0");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa: must be in [0,1]");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha: must be > 0");
  auto check_means = [this](const std::vector<double>& m, const char* key) {
    if (static_cast<int>(m.size()) != n_relays)
      throw std::invalid_argument(std::string(key) + ": needs exactly n_relays entries");
    for (double v : m)
      if (!(v > 0.0)) throw std::invalid_argument(std::string(key) + ": entries must be > 0");
  };
  check_means(mean_g, "mean_g");
  check_means(mean_h, "mean_h");
}

SystemParams SystemParams::symmetric(int n_relays, int levels, double rate,
                                     double snr_db, double kappa, double alpha,
                                     double noise_power) {
  SystemParams p;
  p.n_relays = n_relays;
  p.levels = levels;
  p.rate = rate;
  p.noise_power = noise_power;
  p.source_power = snr_db_to_power(snr_db, noise_power);
  p.kappa = kappa;
  p.alpha = alpha;
  p.mean_g.assign(static_cast<std::size_t>(n_relays), 1.0);
  p.mean_h.assign(static_cast<std::size_t>(n_relays), 1.0);
  p.validate();
  return p;
}

}  // namespace ehrelay

#pragma once

#include <stdexcept>
#include <vector>

#include "ehrelay/params.hpp"

namespace ehrelay {

/// Uniform battery quantization grid b_l = l * B / (L+1) for l = 0..L+1,
/// with b_0 = 0 and b_{L+1} = B. Level l holds usable energy b_l; stored
/// energy maps to the level via the floor convention [b_l, b_{l+1}).
class LevelBoundaries {
 public:
  LevelBoundaries(int levels, double capacity);

  static LevelBoundaries from_params(const SystemParams& params) {
    return LevelBoundaries(params.levels, params.battery_capacity());
  }

  int max_level() const { return static_cast<int>(b_.size()) - 1; }  // L+1
  double capacity() const { return b_.back(); }
  double energy(int level) const { return b_[check(level)]; }
  const std::vector<double>& values() const { return b_; }

  /// Level l with b_l <= energy < b_{l+1}; energies >= B clip to L+1.
  /// Throws std::invalid_argument for negative energy.
  int quantize(double energy) const {
    if (!(energy >= 0.0)) throw std::invalid_argument("quantize: negative energy");
    if (energy >= b_.back()) return max_level();
    int l = static_cast<int>(energy * inv_spacing_);
    if (l > max_level()) l = max_level();
    // exact w.r.t. the stored boundaries
    while (l > 0 && energy < b_[l]) --l;
    while (l < max_level() && energy >= b_[l + 1]) ++l;
    return l;
  }

  /// Harvest: never decreases the level, caps at L+1.
  int charge(int level, double harvested) const {
    if (!(harvested >= 0.0)) throw std::invalid_argument("charge: negative harvested energy");
    return quantize(b_[check(level)] + harvested);
  }

  /// Spend `required` out of the stored energy b_level. Throws
  /// std::logic_error when required > b_level: selection must never pick
  /// a relay it cannot afford.
  int discharge(int level, double required) const {
    double stored = b_[check(level)];
    if (!(required <= stored))
      throw std::logic_error("discharge: required power exceeds stored energy");
    return quantize(stored - required);
  }

 private:
  int check(int level) const {
    if (level < 0 || level > max_level())
      throw std::out_of_range("battery level out of range");
    return level;
  }

  std::vector<double> b_;
  double inv_spacing_;
};

}  // namespace ehrelay

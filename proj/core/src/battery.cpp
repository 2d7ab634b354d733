#include "ehrelay/battery.hpp"

namespace ehrelay {

LevelBoundaries::LevelBoundaries(int levels, double capacity) {
  if (levels < 1) throw std::invalid_argument("levels: must be >= 1");
  if (!(capacity > 0.0)) throw std::invalid_argument("battery capacity must be > 0");
  b_.resize(static_cast<std::size_t>(levels) + 2);
  for (int l = 0; l <= levels + 1; ++l)
    b_[static_cast<std::size_t>(l)] = static_cast<double>(l) * capacity / (levels + 1);
  b_.back() = capacity;  // exact upper boundary
  inv_spacing_ = (levels + 1) / capacity;
}

}  // namespace ehrelay

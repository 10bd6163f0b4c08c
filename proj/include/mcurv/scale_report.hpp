#pragma once

#include <cmath>
#include <vector>

#include "mcurv/common.hpp"

namespace mcurv {

struct ScaleLevel {
  int level = 0;
  double cells = 0;       // cell count at this level (may exceed 2^63)
  double sum = 0;         // per-level energy contribution / lower bound
  double cumulative = 0;  // running total
};

/// Per-scale decomposition of an energy: level sums are modeled as
/// C * base^(level * exponent), so exponent > 0 means growth (divergence)
/// and exponent < 0 geometric decay.
struct ScaleReport {
  std::vector<ScaleLevel> levels;
  double base = 2.0;
  double fitted_exponent = quiet_nan;
  double predicted_exponent = quiet_nan;
  double gap_check = quiet_nan;  // min secant-gap ratio when applicable
};

/// Least-squares slope of log(sum) against level*log(base) over levels with
/// positive sums; NaN when fewer than two usable levels.
inline double fit_scale_exponent(const std::vector<ScaleLevel>& levels, double base) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& l : levels) {
    if (!(l.sum > 0)) continue;
    double x = static_cast<double>(l.level);
    double y = std::log(l.sum);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 2) return quiet_nan;
  double denom = cnt * sxx - sx * sx;
  if (denom == 0) return quiet_nan;
  double slope = (cnt * sxy - sx * sy) / denom;
  return slope / std::log(base);
}

}  // namespace mcurv

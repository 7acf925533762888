#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "geohalu/align/gradcheck.hpp"

namespace geohalu::testing {

// Central differences at eps = 1e-5 on losses of order one carry about
// ulp(1) / 2e-5 ~ 1e-11 of round-off; components whose true derivative is
// zero can only agree to that level.
inline constexpr double kRoundOff = 1e-10;

struct Agreement {
  double max_rel_error = 0.0;  // over components that differ by more than kRoundOff
  double max_abs_error = 0.0;  // over the remaining ones
};

inline Agreement gradient_agreement(const align::Objective& f, std::vector<double> x, double eps = 1e-5) {
  std::vector<double> g;
  f(x, &g);
  Agreement a;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + eps;
    const double up = f(x, nullptr);
    x[i] = keep - eps;
    const double down = f(x, nullptr);
    x[i] = keep;
    const double n = (up - down) / (2 * eps);
    const double d = std::abs(g[i] - n);
    if (d <= kRoundOff) a.max_abs_error = std::max(a.max_abs_error, d);
    else a.max_rel_error = std::max(a.max_rel_error, align::relative_error(g[i], n));
  }
  return a;
}

}  // namespace geohalu::testing

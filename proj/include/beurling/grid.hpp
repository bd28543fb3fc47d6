#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "beurling/error.hpp"

namespace beurling {

/// Geometric grid lo * 10^(j / points_per_decade) clipped to [lo, hi]; hi is
/// appended when it does not fall on the grid.
struct GridSpec {
  double lo = 1.0;
  double hi = 10.0;
  int points_per_decade = 200;

  std::vector<double> points() const {
    if (points_per_decade < 1) throw InputError("points per decade must be >= 1");
    if (!(hi >= lo) || !(lo > 0.0)) throw InputError("grid bounds must satisfy 0 < lo <= hi");
    std::vector<double> out;
    for (int j = 0;; ++j) {
      const double x = lo * std::pow(10.0, static_cast<double>(j) / points_per_decade);
      if (x > hi * (1.0 + 1e-12)) break;
      out.push_back(std::min(x, hi));
    }
    if (out.back() < hi * (1.0 - 1e-12)) out.push_back(hi);
    return out;
  }

  std::string describe() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "geometric lo=%.12g hi=%.12g points_per_decade=%d plus jump points", lo, hi,
                  points_per_decade);
    return buf;
  }
};

}  // namespace beurling

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "beurling/counting.hpp"
#include "beurling/error.hpp"
#include "beurling/grid.hpp"

namespace beurling {

enum class DensityMethod { known_exact, regression, final_ratio };

inline std::string_view to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::known_exact: return "known-exact";
    case DensityMethod::regression: return "regression";
    case DensityMethod::final_ratio: return "final-ratio";
  }
  return "unknown";
}

inline DensityMethod parse_density_method(std::string_view s) {
  if (s == "known-exact") return DensityMethod::known_exact;
  if (s == "regression") return DensityMethod::regression;
  if (s == "final-ratio") return DensityMethod::final_ratio;
  throw InputError("unknown density method '" + std::string(s) + "'");
}

struct DensityEstimate {
  double a = 0.0;
  DensityMethod method = DensityMethod::known_exact;
};

/// Estimates the density constant a in N(x) ~ a x.
///
/// known-exact returns `declared`; final-ratio returns N(x_max)/x_max;
/// regression fits N(x) = a x + b by least squares on 1000 evenly spaced
/// points of the top decade [x_max/10, x_max].
///
/// Estimates are rejected as collapsed when a * x_max < sqrt(x_max), i.e. the
/// table holds fewer than sqrt(x_max) elements: polylogarithmic growth such
/// as a finite prime set never passes at useful cutoffs.
inline DensityEstimate estimate_density(const CountingTable& table, DensityMethod method,
                                        std::optional<double> declared = std::nullopt) {
  if (method == DensityMethod::known_exact) {
    if (!declared) throw ComputeError("known-exact density requires a declared value of a");
    if (!(*declared > 0.0)) throw ComputeError("declared density must be positive");
    return {*declared, method};
  }
  const double x_max = table.x_max();
  if (const auto p1 = table.smallest_prime(); p1 && x_max < 100.0 * *p1)
    throw ComputeError("insufficient range for density estimate: x_max < 100 * p1");
  double a = 0.0;
  if (method == DensityMethod::final_ratio) {
    a = static_cast<double>(table.N(x_max)) / x_max;
  } else {
    constexpr int kPoints = 1000;
    const double lo = x_max / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < kPoints; ++i) {
      const double x = lo + (x_max - lo) * i / (kPoints - 1);
      const double y = static_cast<double>(table.N(x));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = kPoints;
    a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  if (!(a > 0.0) || a * x_max < std::sqrt(x_max))
    throw ComputeError("density collapses toward 0 (estimate " + std::to_string(a) + ")");
  return {a, method};
}

namespace detail {

// int_l^r |c - a x| / x^2 dx for constant c, split at the crossing x = c/a.
// The signed piece is c (r-l)/(l r) - a log1p((r-l)/l): both terms are
// accurate even when r - l is tiny next to l.
inline long double l1_piece(double c, double a, double l, double r) {
  const auto signed_piece = [c, a](double lo, double hi) -> long double {
    const long double d = static_cast<long double>(hi) - lo;
    return c * d / (static_cast<long double>(lo) * hi) - a * std::log1p(d / lo);
  };
  if (!(r > l)) return 0.0L;
  const double cross = c / a;
  if (cross > l && cross < r) return std::abs(signed_piece(l, cross)) + std::abs(signed_piece(cross, r));
  return std::abs(signed_piece(l, r));
}

}  // namespace detail

/// int_lo^hi |N(x) - a x| / x^2 dx, exact up to rounding: N is constant
/// (= j + 1) on (v_j, v_{j+1}], where v_j are the sorted element values.
inline double l1_integral(const CountingTable& table, double a, double lo, double hi) {
  if (!(a > 0.0)) throw ComputeError("density a must be positive");
  if (!(lo >= 1.0) || hi > table.x_max() || !(hi >= lo)) throw ComputeError("l1 integral bounds out of range");
  const auto entries = table.entries();
  long double sum = 0.0L;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const double left = entries[j].value;
    const double right = j + 1 < entries.size() ? entries[j + 1].value : table.x_max();
    if (right <= lo) continue;
    if (left >= hi) break;
    sum += detail::l1_piece(static_cast<double>(j + 1), a, std::max(left, lo), std::min(right, hi));
  }
  return static_cast<double>(sum);
}

struct L1Profile {
  std::vector<std::pair<double, double>> values;   // (X, int_1^X)
  std::vector<std::array<double, 3>> tails;        // (X1, X2, int_X1^X2)
};

/// Checkpoint profile of the L1 condition integral. Values come from one
/// pass from x = 1; tails are integrated independently between consecutive
/// checkpoints.
inline L1Profile l1_condition_profile(const CountingTable& table, double a, std::span<const double> checkpoints) {
  if (!(a > 0.0)) throw ComputeError("density a must be positive");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 1.0) || checkpoints[i] > table.x_max())
      throw ComputeError("checkpoint outside (1, x_max]");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) throw ComputeError("checkpoints must increase");
  }
  L1Profile out;
  const auto entries = table.entries();
  long double acc = 0.0L;
  std::size_t j = 0;
  double pos = 1.0;
  for (double X : checkpoints) {
    while (pos < X) {
      const double right = j + 1 < entries.size() ? entries[j + 1].value : table.x_max();
      if (right >= X) {
        acc += detail::l1_piece(static_cast<double>(j + 1), a, pos, X);
        pos = X;
        break;
      }
      if (right > pos) {
        acc += detail::l1_piece(static_cast<double>(j + 1), a, pos, right);
        pos = right;
      }
      ++j;
    }
    out.values.emplace_back(X, static_cast<double>(acc));
  }
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    out.tails.push_back({checkpoints[i - 1], checkpoints[i], l1_integral(table, a, checkpoints[i - 1], checkpoints[i])});
  return out;
}

struct SupResult {
  double sup = 0.0;
  double argmax = 0.0;
};

namespace detail {

inline void take_max(SupResult& r, double value, double at) {
  if (value > r.sup) r = {value, at};
}

inline void check_grid(std::span<const double> grid, double lo_exclusive, double x_max, const char* what) {
  if (grid.empty()) throw ComputeError(std::string(what) + ": empty grid");
  for (double x : grid)
    if (!(x > lo_exclusive) || x > x_max) throw ComputeError(std::string(what) + ": grid point outside range");
}

// Entries whose values lie in [lo, hi], as an index range.
inline std::pair<std::size_t, std::size_t> entries_within(const CountingTable& table, double lo, double hi) {
  const auto e = table.entries();
  const double llo = std::log(lo), lhi = std::log(hi);
  const auto b = std::lower_bound(e.begin(), e.end(), llo, [](const TableEntry& t, double l) { return t.log_value < l; });
  const auto f = std::upper_bound(e.begin(), e.end(), lhi, [](double l, const TableEntry& t) { return l < t.log_value; });
  return {static_cast<std::size_t>(b - e.begin()), static_cast<std::size_t>(f - e.begin())};
}

}  // namespace detail

/// sup of |N(x) - a x| log^gamma(x) / x over the grid and over both one-sided
/// limits at every jump of N inside [min grid, max grid].
inline SupResult log_error_sup(const CountingTable& table, double a, double gamma, std::span<const double> grid) {
  if (!(a > 0.0)) throw ComputeError("density a must be positive");
  if (!(gamma >= 0.0)) throw ComputeError("gamma must be >= 0");
  detail::check_grid(grid, std::numbers::e, table.x_max(), "log_error_sup");
  const auto weight = [a, gamma](double n, double x) { return std::abs(n - a * x) * std::pow(std::log(x), gamma) / x; };
  SupResult r;
  for (double x : grid) detail::take_max(r, weight(static_cast<double>(table.N(x)), x), x);
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  const auto [b, f] = detail::entries_within(table, *lo, *hi);
  const auto entries = table.entries();
  for (std::size_t j = b; j < f; ++j) {
    const double x = entries[j].value;
    detail::take_max(r, weight(static_cast<double>(j), x), x);
    detail::take_max(r, weight(static_cast<double>(j + 1), x), x);
  }
  return r;
}

struct ChebyshevRatios {
  SupResult pi_ratio;
  SupResult psi_ratio;
};

/// sup pi(x) log x / x (over grid points > e) and sup psi(x)/x, evaluated at
/// grid points and at one-sided limits of every jump inside the grid range.
inline ChebyshevRatios chebyshev_ratios(const CountingTable& table, std::span<const double> grid) {
  detail::check_grid(grid, 1.0, table.x_max(), "chebyshev_ratios");
  const auto [lo_it, hi_it] = std::minmax_element(grid.begin(), grid.end());
  if (!(*hi_it > std::numbers::e)) throw ComputeError("chebyshev_ratios: pi ratio needs grid points above e");
  ChebyshevRatios r;
  const auto pi_term = [](double pi, double x) { return x > std::numbers::e ? pi * std::log(x) / x : 0.0; };
  for (double x : grid) {
    const Counts c = table.below(x);
    detail::take_max(r.pi_ratio, pi_term(static_cast<double>(c.pi), x), x);
    detail::take_max(r.psi_ratio, c.psi / x, x);
  }
  const auto [b, f] = detail::entries_within(table, *lo_it, *hi_it);
  const auto entries = table.entries();
  for (std::size_t j = b; j < f; ++j) {
    if (entries[j].lambda == 0.0) continue;
    const double x = entries[j].value;
    for (std::size_t k : {j, j + 1}) {
      const Counts c = table.prefix(k);
      detail::take_max(r.pi_ratio, pi_term(static_cast<double>(c.pi), x), x);
      detail::take_max(r.psi_ratio, c.psi / x, x);
    }
  }
  return r;
}

struct HypothesisReport {
  std::string label;
  double x_max = 0.0;
  DensityEstimate density;
  L1Profile l1;
  double gamma = 1.0;
  SupResult log_error;
  ChebyshevRatios chebyshev;
  std::string grid_spec;
};

/// Runs every diagnostic with one density estimate.
inline HypothesisReport make_report(const CountingTable& table, DensityEstimate density,
                                    std::span<const double> checkpoints, double gamma, const GridSpec& grid_spec) {
  const std::vector<double> grid = grid_spec.points();
  HypothesisReport report;
  report.label = table.label();
  report.x_max = table.x_max();
  report.density = density;
  report.l1 = l1_condition_profile(table, density.a, checkpoints);
  report.gamma = gamma;
  report.log_error = log_error_sup(table, density.a, gamma, grid);
  report.chebyshev = chebyshev_ratios(table, grid);
  report.grid_spec = grid_spec.describe();
  return report;
}

/// Checkpoints 10, 100, ... below x_max, then x_max itself.
inline std::vector<double> decade_checkpoints(double x_max) {
  std::vector<double> out;
  for (double X = 10.0; X < x_max * (1.0 - 1e-12); X *= 10.0) out.push_back(X);
  out.push_back(x_max);
  return out;
}

inline nlohmann::json to_json(const HypothesisReport& r) {
  nlohmann::json profile = nlohmann::json::array();
  for (const auto& [X, v] : r.l1.values) profile.push_back({X, v});
  nlohmann::json tails = nlohmann::json::array();
  for (const auto& t : r.l1.tails) tails.push_back({t[0], t[1], t[2]});
  return {
      {"label", r.label},
      {"a_estimate", r.density.a},
      {"a_method", std::string(to_string(r.density.method))},
      {"l1_profile", profile},
      {"l1_tails", tails},
      {"log_error_sup", {{"gamma", r.gamma}, {"sup", r.log_error.sup}, {"argmax", r.log_error.argmax}}},
      {"pi_ratio", {{"sup", r.chebyshev.pi_ratio.sup}, {"argmax", r.chebyshev.pi_ratio.argmax}}},
      {"psi_ratio", {{"sup", r.chebyshev.psi_ratio.sup}, {"argmax", r.chebyshev.psi_ratio.argmax}}},
      {"grid_spec", r.grid_spec},
      {"x_max", r.x_max},
  };
}

}  // namespace beurling

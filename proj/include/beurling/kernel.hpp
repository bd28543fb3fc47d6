#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "beurling/counting.hpp"
#include "beurling/error.hpp"
#include "beurling/quadrature.hpp"

namespace beurling {

/// Fejer kernel: phi(t) = max(0, 1 - |t|/c), supported in (-c, c), with
/// phi_hat(u) = int phi(t) e^{iut} dt = c (sin(cu/2) / (cu/2))^2 >= 0.
class FejerKernel {
 public:
  explicit FejerKernel(double c) : c_(c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ComputeError("kernel half-width c must be positive");
    deduction_constant_ = exp_weighted_mass(kHorizon);
    if (!(deduction_constant_ > 0.0)) throw ComputeError("kernel deduction constant is not positive");
  }

  double c() const { return c_; }

  double phi(double t) const { return std::max(0.0, 1.0 - std::abs(t) / c_); }

  double phi_hat(double u) const {
    const double x = 0.5 * c_ * u;
    if (std::abs(x) < 1e-8) return c_;
    const double r = std::sin(x) / x;
    return c_ * r * r;
  }

  /// C = int_0^inf e^{-u} phi_hat(u) du, by quadrature.
  double deduction_constant() const { return deduction_constant_; }

  /// int_0^U e^{-u} phi_hat(u) du / C.
  double covered_fraction(double U) const {
    if (!(U > 0.0)) return 0.0;
    return exp_weighted_mass(std::min(U, kHorizon)) / deduction_constant_;
  }

  /// Panel width resolving one oscillation of phi_hat.
  double panel() const { return std::numbers::pi / c_; }

 private:
  // e^{-60} is far below double resolution of C.
  static constexpr double kHorizon = 60.0;

  double exp_weighted_mass(double U) const {
    return quadrature::panelled_simpson([this](double u) { return std::exp(-u) * phi_hat(u); }, 0.0, U, panel(),
                                        1e-13);
  }

  double c_;
  double deduction_constant_ = 0.0;
};

struct KernelRow {
  double h = 0.0;
  double average = 0.0;
  double margin = 0.0;
};

/// Convolution averages of T(u) = e^{-u} psi(e^u) against the kernel.
/// T is e^{-u} times a step function, so integrals are split at every jump
/// of psi and each smooth piece is integrated with adaptive Simpson.
class ChebyshevSmoother {
 public:
  static constexpr double kMinCoverage = 0.99;

  explicit ChebyshevSmoother(const CountingTable& table) : u_max_(std::log(table.x_max())) {
    const auto entries = table.entries();
    for (std::size_t j = 0; j < entries.size(); ++j)
      if (entries[j].lambda > 0.0) jumps_.push_back({entries[j].log_value, table.prefix(j + 1).psi});
  }

  double u_max() const { return u_max_; }

  /// T(u) with the strict convention psi(x) = sum over n_k < x.
  double T(double u) const { return std::exp(-u) * level_below(u); }

  /// int_0^{log x_max} T(u) phi_hat(u - h) du normalised by the kernel mass
  /// int_0^{log x_max} phi_hat(u - h) du over the same window.
  double average(const FejerKernel& kernel, double h) const {
    check_h(kernel, h);
    const double mass = quadrature::panelled_simpson([&](double u) { return kernel.phi_hat(u - h); }, 0.0, u_max_,
                                                     kernel.panel(), 1e-12);
    return integrate(kernel, h, 0.0, u_max_) / mass;
  }

  /// (1/C) int_0^{U} T(u + h) phi_hat(u) du - T(h), U = log x_max - h.
  double margin(const FejerKernel& kernel, double h) const {
    check_h(kernel, h);
    return integrate(kernel, h, h, u_max_) / kernel.deduction_constant() - T(h);
  }

 private:
  struct Jump {
    double u;
    double level_after;
  };

  double level_below(double u) const {
    const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), u, [](const Jump& j, double v) { return j.u < v; });
    return it == jumps_.begin() ? 0.0 : std::prev(it)->level_after;
  }

  void check_h(const FejerKernel& kernel, double h) const {
    if (!(h >= 0.0)) throw ComputeError("shift h must be >= 0");
    if (kernel.covered_fraction(u_max_ - h) < kMinCoverage)
      throw ComputeError("shift h = " + std::to_string(h) + " leaves less than 99% of the kernel mass inside the data");
  }

  // int_lo^hi T(v) phi_hat(v - h) dv.
  double integrate(const FejerKernel& kernel, double h, double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    const double span = hi - lo;
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), lo, [](const Jump& j, double v) { return j.u < v; });
    double level = it == jumps_.begin() ? 0.0 : std::prev(it)->level_after;
    double pos = lo;
    long double sum = 0.0L;
    const auto f = [&](double v) { return std::exp(-v) * kernel.phi_hat(v - h); };
    while (pos < hi) {
      const double next = it != jumps_.end() ? std::min(it->u, hi) : hi;
      if (next > pos && level > 0.0)
        sum += level * quadrature::adaptive_simpson(f, pos, next, 1e-11 * (next - pos) / span);
      pos = std::max(pos, next);
      if (it == jumps_.end() || pos >= hi) break;
      level = it->level_after;
      ++it;
    }
    return static_cast<double>(sum);
  }

  double u_max_;
  std::vector<Jump> jumps_;
};

inline double smoothed_T_average(const CountingTable& table, const FejerKernel& kernel, double h) {
  return ChebyshevSmoother(table).average(kernel, h);
}

/// Smallest margin of the monotonicity deduction over `h_grid`.
inline double deduction_margin_check(const CountingTable& table, const FejerKernel& kernel,
                                      std::span<const double> h_grid) {
  if (h_grid.empty()) throw ComputeError("empty h grid");
  const ChebyshevSmoother smoother(table);
  double worst = std::numeric_limits<double>::infinity();
  for (double h : h_grid) worst = std::min(worst, smoother.margin(kernel, h));
  return worst;
}

inline std::vector<KernelRow> kernel_sweep(const CountingTable& table, const FejerKernel& kernel,
                                           std::span<const double> h_grid) {
  const ChebyshevSmoother smoother(table);
  std::vector<KernelRow> rows;
  rows.reserve(h_grid.size());
  for (double h : h_grid) rows.push_back({h, smoother.average(kernel, h), smoother.margin(kernel, h)});
  return rows;
}

}  // namespace beurling

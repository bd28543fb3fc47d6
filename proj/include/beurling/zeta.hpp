#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "beurling/counting.hpp"
#include "beurling/error.hpp"
#include "beurling/prime_system.hpp"

namespace beurling {

using Complex = std::complex<double>;

/// s = sigma + i t.
struct ComplexPoint {
  double sigma = 2.0;
  double t = 0.0;
  Complex s() const { return {sigma, t}; }
};

/// A transform evaluated from finite data, with an estimate of the modulus
/// of the neglected tail. Comparisons must allow at least truncation_bound.
struct TransformValue {
  Complex value;
  double truncation_bound = 0.0;
  double x_trunc = 0.0;
};

namespace detail {

using LComplex = std::complex<long double>;

inline void require_right_half_plane(ComplexPoint s) {
  if (!(s.sigma > 1.0)) throw ComputeError("transform needs Re s > 1, got " + std::to_string(s.sigma));
}

/// e^z - 1 without cancellation for small |z|.
inline LComplex cexpm1(LComplex z) {
  const long double x = z.real(), y = z.imag();
  const long double half = std::sin(y / 2);
  return {std::expm1(x) * std::cos(y) - 2 * half * half, std::exp(x) * std::sin(y)};
}

/// int_l^{l+d} u e^{-beta u} du.
inline LComplex first_moment(LComplex beta, long double l, long double d) {
  const LComplex bd = beta * d;
  const LComplex bracket = -(beta * l + 1.0L) * cexpm1(-bd) - bd * std::exp(-bd);
  return std::exp(-beta * l) * bracket / (beta * beta);
}

/// Twice the classical maximum of pi(x) log x / x; used when a system has no
/// primes from which to read a Chebyshev ratio.
inline constexpr double kFallbackChebyshev = 2.0 * 1.25506;

}  // namespace detail

/// Truncated Euler product prod_{p < x_trunc} (1 - p^{-s})^{-1}.
///
/// x_trunc defaults to the coverage bound (all primes for finite systems).
/// The truncation bound is |value| * (e^tau - 1), where tau bounds
/// sum_{p >= x_trunc} -log(1 - p^{-sigma}): stored primes beyond x_trunc are
/// summed directly and primes beyond the coverage bound X are covered by
/// sigma B X^{1-sigma} / ((sigma - 1) log X), with B twice the largest
/// observed pi(p) log p / p over stored primes in [X/10, X). This is a crude
/// model, not a proof.
inline TransformValue zeta_euler(const PrimeSystem& system, ComplexPoint point,
                                 std::optional<double> x_trunc = std::nullopt) {
  detail::require_right_half_plane(point);
  const double coverage = system.complete_below();
  const double X = x_trunc.value_or(coverage);
  if (!(X > 1.0)) throw ComputeError("truncation point must exceed 1");
  if (X > coverage) throw ComputeError("truncation point exceeds the stored prime prefix");
  const Complex s = point.s();
  const auto primes = system.primes();
  const auto logs = system.log_primes();
  Complex product = 1.0;
  long double known_tail = 0.0L;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] < X)
      product /= 1.0 - std::exp(-s * logs[i]);
    else
      known_tail += std::exp(-point.sigma * logs[i]);
  }
  double unknown_tail = 0.0;
  if (!system.is_finite_system()) {
    double B = 0.0;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (primes[i] >= coverage / 10.0 && primes[i] < coverage && primes[i] > std::exp(1.0))
        B = std::max(B, static_cast<double>(i + 1) * logs[i] / primes[i]);
    B = B > 0.0 ? 2.0 * B : detail::kFallbackChebyshev;
    const double sigma = point.sigma;
    unknown_tail = sigma * B * std::pow(coverage, 1.0 - sigma) / ((sigma - 1.0) * std::log(coverage));
  }
  const double tau = (static_cast<double>(known_tail) + unknown_tail) / (1.0 - std::pow(X, -point.sigma));
  return {product, std::abs(product) * std::expm1(tau), X};
}

/// Laplace transforms of E1(u) = e^{-u} N(e^u) - a H(u) and E2(u) = u E1(u)
/// at w = s - 1, integrated exactly over [0, log x_max]. E1 is k e^{-u} - a
/// between consecutive element logs, which gives closed forms per piece.
/// Beyond the cutoff E1 is modelled as 0; the bounds assume |E1| stays below
/// its largest modulus observed over the top decade of the table.
struct ErrorTransforms {
  Complex L1;
  Complex L2;
  double bound1 = 0.0;
  double bound2 = 0.0;
  double tail_sup = 0.0;
};

inline ErrorTransforms error_transforms(const CountingTable& table, double a, ComplexPoint point) {
  detail::require_right_half_plane(point);
  if (!(a > 0.0)) throw ComputeError("density a must be positive");
  using detail::LComplex;
  const LComplex s(point.sigma, point.t);
  const LComplex w = s - 1.0L;
  const long double U = std::log(static_cast<long double>(table.x_max()));
  const long double tail_start = U - std::log(10.0L);
  const auto entries = table.entries();
  LComplex zero_moment = 0.0L;
  LComplex one_moment = 0.0L;
  double tail_sup = 0.0;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const long double l = entries[j].log_value;
    const long double r = j + 1 < entries.size() ? entries[j + 1].log_value : U;
    const long double k = static_cast<long double>(j + 1);
    const long double d = r - l;
    if (d > 0.0L) {
      zero_moment += k * std::exp(-s * l) * -detail::cexpm1(-s * d);
      one_moment += k * detail::first_moment(s, l, d);
    }
    if (r >= tail_start) {
      tail_sup = std::max(tail_sup, static_cast<double>(std::abs(k * std::exp(-l) - a)));
      tail_sup = std::max(tail_sup, static_cast<double>(std::abs(k * std::exp(-r) - a)));
    }
  }
  const LComplex L1 = zero_moment / s - static_cast<long double>(a) * -detail::cexpm1(-w * U) / w;
  const LComplex L2 = one_moment - static_cast<long double>(a) * detail::first_moment(w, 0.0L, U);
  const double sm1 = point.sigma - 1.0;
  const double decay = std::exp(-sm1 * static_cast<double>(U));
  ErrorTransforms out;
  out.L1 = Complex(static_cast<double>(L1.real()), static_cast<double>(L1.imag()));
  out.L2 = Complex(static_cast<double>(L2.real()), static_cast<double>(L2.imag()));
  out.tail_sup = tail_sup;
  out.bound1 = tail_sup * decay / sm1;
  out.bound2 = tail_sup * decay * (static_cast<double>(U) * sm1 + 1.0) / (sm1 * sm1);
  return out;
}

/// zeta(s) = s L{E1; s-1} + a + a/(s-1).
inline TransformValue zeta_mellin(const CountingTable& table, double a, ComplexPoint point) {
  const ErrorTransforms et = error_transforms(table, a, point);
  const Complex s = point.s();
  return {s * et.L1 + a + a / (s - 1.0), std::abs(s) * et.bound1, table.x_max()};
}

/// zeta(sigma + it) by the Mellin route along `t_values`. The bounds are
/// truncation bounds only: a modulus clear of its bound shows no zero at that
/// point, it does not certify a zero-free region.
inline std::vector<TransformValue> zeta_profile(const CountingTable& table, double a, double sigma,
                                                std::span<const double> t_values) {
  std::vector<TransformValue> out;
  out.reserve(t_values.size());
  for (double t : t_values) out.push_back(zeta_mellin(table, a, {sigma, t}));
  return out;
}

/// L{psi(e^u); s} = (1/s) sum_{n_k < x_max} Lambda(n_k) n_k^{-s}.
/// The tail bound assumes psi(x) <= R x beyond the cutoff, R being the largest
/// observed psi(x)/x over [x_max/10, x_max].
inline TransformValue psi_laplace(const CountingTable& table, ComplexPoint point) {
  detail::require_right_half_plane(point);
  using detail::LComplex;
  const LComplex s(point.sigma, point.t);
  const auto entries = table.entries();
  const double x_max = table.x_max();
  const double lo = x_max / 10.0;
  LComplex sum = 0.0L;
  double ratio = lo >= 1.0 ? table.psi(lo) / lo : 0.0;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (entries[j].lambda == 0.0) continue;
    sum += static_cast<long double>(entries[j].lambda) * std::exp(-s * static_cast<long double>(entries[j].log_value));
    if (entries[j].value >= lo) ratio = std::max(ratio, table.prefix(j + 1).psi / entries[j].value);
  }
  const LComplex value = sum / s;
  const double sigma = point.sigma;
  const double bound = sigma * ratio * std::pow(x_max, 1.0 - sigma) / ((sigma - 1.0) * std::abs(point.s()));
  return {Complex(static_cast<double>(value.real()), static_cast<double>(value.imag())), bound, x_max};
}

struct IdentityResidual {
  Complex lhs;
  Complex rhs;
  Complex residual;
  double bound = 0.0;
};

/// Compares -zeta'/(s zeta) computed as L{psi(e^u); s} against
///   L{E2'; s-1}/((s-1) zeta) - ((2s-1) L{E1; s-1} + a)/(s (s-1) zeta) - 1/s + 1/(s-1)
/// with L{E2'; s-1} = (s-1) L{E2; s-1} and zeta from zeta_mellin.
/// The bound adds the LHS tail to a first-order propagation of the E1/E2
/// tails through the right-hand side, using |zeta| - delta in denominators.
inline IdentityResidual log_derivative_residual(const CountingTable& table, double a, ComplexPoint point) {
  const TransformValue lhs = psi_laplace(table, point);
  const ErrorTransforms et = error_transforms(table, a, point);
  const Complex s = point.s();
  const Complex w = s - 1.0;
  const Complex zeta = s * et.L1 + a + a / w;
  const double dz = std::abs(s) * et.bound1;
  const double mod = std::abs(zeta);
  if (!(mod > 10.0 * dz) || mod == 0.0) throw ComputeError("zeta too close to zero for the identity check");
  const Complex e2_prime = w * et.L2;
  const Complex q = (2.0 * s - 1.0) * et.L1 + a;
  const Complex rhs = e2_prime / (w * zeta) - q / (s * w * zeta) - 1.0 / s + 1.0 / w;
  const double z_low = mod - dz;
  const double sw = std::abs(s * w);
  const double rhs_bound = et.bound2 / z_low + std::abs(et.L2) * dz / (mod * z_low) +
                           std::abs(2.0 * s - 1.0) * et.bound1 / (sw * z_low) + std::abs(q) * dz / (sw * mod * z_low);
  return {lhs.value, rhs, lhs.value - rhs, lhs.truncation_bound + rhs_bound};
}

}  // namespace beurling

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beurling/error.hpp"
#include "beurling/prime_system.hpp"

namespace beurling {

/// One prime index with a positive exponent.
struct Factor {
  std::uint32_t index = 0;
  std::uint32_t exponent = 0;
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Sum of exponent * log(prime) accumulated in increasing index order.
/// Every log_value in the library goes through this function, so two
/// elements with the same exponents always carry bit-identical logs.
inline double canonical_log(std::span<const Factor> factors, std::span<const double> log_primes) {
  double sum = 0.0;
  for (const Factor& f : factors) sum += static_cast<double>(f.exponent) * log_primes[f.index];
  return sum;
}

/// Product of primes by repeated multiplication in increasing index order.
/// Exact for integer primes whose products stay below 2^53.
inline double canonical_product(std::span<const Factor> factors, std::span<const double> primes) {
  double value = 1.0;
  for (const Factor& f : factors)
    for (std::uint32_t k = 0; k < f.exponent; ++k) value *= primes[f.index];
  return value;
}

/// A generalized integer: an element of the free commutative monoid on the
/// primes, stored as a sparse exponent vector sorted by prime index.
class Element {
 public:
  /// The unit (empty product).
  Element() = default;

  Element(std::vector<Factor> factors, std::span<const double> log_primes) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].exponent == 0) throw ComputeError("element exponent must be positive");
      if (factors_[i].index >= log_primes.size()) throw ComputeError("element prime index out of range");
      if (i > 0 && factors_[i].index <= factors_[i - 1].index)
        throw ComputeError("element factors must have strictly increasing indices");
    }
    log_value_ = canonical_log(factors_, log_primes);
  }

  const std::vector<Factor>& factors() const { return factors_; }
  double log_value() const { return log_value_; }
  bool is_unit() const { return factors_.empty(); }

  /// Largest prime index present; only meaningful for non-units.
  std::uint32_t max_index() const { return factors_.back().index; }

  /// exponent at `index`, zero when absent.
  std::uint32_t exponent(std::uint32_t index) const {
    const auto it = std::lower_bound(factors_.begin(), factors_.end(), index,
                                     [](const Factor& f, std::uint32_t i) { return f.index < i; });
    return it != factors_.end() && it->index == index ? it->exponent : 0;
  }

  /// this * p_index, for index >= max_index() (the canonical extension).
  Element times(std::uint32_t index, std::span<const double> log_primes) const {
    Element out;
    out.factors_ = factors_;
    if (!out.factors_.empty() && out.factors_.back().index == index)
      ++out.factors_.back().exponent;
    else
      out.factors_.push_back({index, 1});
    out.log_value_ = canonical_log(out.factors_, log_primes);
    return out;
  }

  /// Distinct factorizations are distinct elements, whatever their values.
  friend bool operator==(const Element& a, const Element& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<Factor> factors_;
  double log_value_ = 0.0;
};

/// Lexicographic comparison of the dense exponent vectors, reading from the
/// lowest prime index.
inline std::strong_ordering lex_compare(const Element& a, const Element& b) {
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i] == fb[i]) continue;
    // The side holding the smaller index has a positive entry where the other has zero.
    if (fa[i].index != fb[i].index)
      return fa[i].index < fb[i].index ? std::strong_ordering::greater : std::strong_ordering::less;
    return fa[i].exponent <=> fb[i].exponent;
  }
  if (fa.size() == fb.size()) return std::strong_ordering::equal;
  return fa.size() > fb.size() ? std::strong_ordering::greater : std::strong_ordering::less;
}

/// Enumeration order: log_value, then lexicographic exponent vector.
inline bool precedes(const Element& a, const Element& b) {
  if (a.log_value() != b.log_value()) return a.log_value() < b.log_value();
  return lex_compare(a, b) == std::strong_ordering::less;
}

inline double element_value(const Element& e, const PrimeSystem& system) {
  for (const Factor& f : e.factors())
    if (f.index >= system.size())
      throw ComputeError("element references prime index " + std::to_string(f.index) + " but system has " +
                         std::to_string(system.size()) + " primes");
  return std::exp(e.log_value());
}

/// Strict membership test `value < x` that stays exact for integer systems.
///
/// Away from the boundary the log comparison decides. Within a few ulps of
/// log(x) the float sum can land on either side, so the canonical product is
/// compared against x directly.
class Cutoff {
 public:
  explicit Cutoff(double x) : x_(x), log_x_(std::log(x)), slack_(1e-11 * std::max(1.0, std::abs(log_x_))) {}

  double x() const { return x_; }
  double log_x() const { return log_x_; }

  bool definitely_above(double log_value) const { return log_value > log_x_ + slack_; }

  bool admits(double log_value, std::span<const Factor> factors, std::span<const double> primes) const {
    if (log_value < log_x_ - slack_) return true;
    if (log_value > log_x_ + slack_) return false;
    return canonical_product(factors, primes) < x_;
  }

  /// Same test when the product value is already known.
  bool admits(double log_value, double value) const {
    if (log_value < log_x_ - slack_) return true;
    if (log_value > log_x_ + slack_) return false;
    return value < x_;
  }

  double lower_window() const { return log_x_ - slack_; }
  double upper_window() const { return log_x_ + slack_; }

 private:
  double x_;
  double log_x_;
  double slack_;
};

}  // namespace beurling

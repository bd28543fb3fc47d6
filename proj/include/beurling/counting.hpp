#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "beurling/element.hpp"
#include "beurling/enumerate.hpp"
#include "beurling/error.hpp"
#include "beurling/prime_system.hpp"
#include "beurling/quadrature.hpp"

namespace beurling {

/// One enumerated generalized integer as seen by the counting functions.
struct TableEntry {
  double log_value = 0.0;
  double value = 1.0;   // canonical product
  double lambda = 0.0;  // log p on prime powers p^m, else 0
  bool is_prime = false;
};

/// Values of the four counting functions at one point.
struct Counts {
  std::size_t n = 0;
  std::size_t pi = 0;
  double theta = 0.0;
  double psi = 0.0;
};

/// Value-sorted record of all generalized integers below a cutoff with
/// prefix sums for O(log n) queries of N, pi, theta and psi. All queries
/// use strict inequality: N(x) counts elements with value < x.
class CountingTable {
 public:
  static CountingTable build(const PrimeSystem& system, double x_max, EnumerationOptions options = {}) {
    CountingTable table;
    table.x_max_ = x_max;
    table.label_ = system.label();
    if (!system.empty()) table.smallest_prime_ = system.primes().front();
    Enumerator it(system, x_max, options);
    const auto primes = system.primes();
    const auto logs = system.log_primes();
    while (auto e = it.next()) {
      TableEntry entry;
      entry.log_value = e->log_value();
      entry.value = canonical_product(e->factors(), primes);
      if (e->factors().size() == 1) {
        entry.lambda = logs[e->factors().front().index];
        entry.is_prime = e->factors().front().exponent == 1;
      }
      table.entries_.push_back(entry);
    }
    table.accumulate();
    table.verify_prefix_sample();
    return table;
  }

  double x_max() const { return x_max_; }
  const std::string& label() const { return label_; }
  std::span<const TableEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<double> smallest_prime() const { return smallest_prime_; }

  /// Counts over entries [0, i).
  Counts prefix(std::size_t i) const {
    return Counts{i, prime_count_[i], static_cast<double>(theta_[i]), static_cast<double>(psi_[i])};
  }

  /// Counts over entries with value < x, for 1 <= x <= x_max.
  Counts below(double x) const {
    check_range(x);
    const Cutoff cut(x);
    const auto lo = std::lower_bound(entries_.begin(), entries_.end(), cut.lower_window(),
                                     [](const TableEntry& e, double l) { return e.log_value < l; });
    std::size_t i = static_cast<std::size_t>(lo - entries_.begin());
    Counts c = prefix(i);
    for (; i < entries_.size() && entries_[i].log_value <= cut.upper_window(); ++i) {
      const TableEntry& e = entries_[i];
      if (!(e.value < x)) continue;
      ++c.n;
      c.psi += e.lambda;
      if (e.is_prime) {
        ++c.pi;
        c.theta += e.lambda;
      }
    }
    return c;
  }

  std::size_t N(double x) const { return below(x).n; }
  std::size_t pi(double x) const { return below(x).pi; }
  double theta(double x) const { return below(x).theta; }
  double psi(double x) const { return below(x).psi; }

  /// Distinct prime values in increasing order.
  std::vector<double> prime_values() const {
    std::vector<double> out;
    for (const auto& e : entries_)
      if (e.is_prime && (out.empty() || out.back() != e.value)) out.push_back(e.value);
    return out;
  }

 private:
  void check_range(double x) const {
    if (!(x >= 1.0) || x > x_max_)
      throw ComputeError("query point " + std::to_string(x) + " outside [1, " + std::to_string(x_max_) + "]");
  }

  void accumulate() {
    const std::size_t n = entries_.size();
    prime_count_.assign(n + 1, 0);
    theta_.assign(n + 1, 0.0L);
    psi_.assign(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      const TableEntry& e = entries_[i];
      prime_count_[i + 1] = prime_count_[i] + (e.is_prime ? 1 : 0);
      theta_[i + 1] = theta_[i] + (e.is_prime ? e.lambda : 0.0L);
      psi_[i + 1] = psi_[i] + e.lambda;
    }
  }

  // Prefix sums against direct compensated sums on evenly spaced prefixes.
  void verify_prefix_sample() const {
    constexpr std::size_t kSamples = 8;
    const std::size_t n = entries_.size();
    for (std::size_t s = 1; s <= kSamples; ++s) {
      const std::size_t end = n * s / kSamples;
      double sum = 0.0, comp = 0.0;
      std::size_t primes = 0;
      for (std::size_t i = 0; i < end; ++i) {
        const double y = entries_[i].lambda - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        primes += entries_[i].is_prime ? 1 : 0;
      }
      const double cum = static_cast<double>(psi_[end]);
      if (primes != prime_count_[end] || std::abs(cum - sum) > 1e-9 * std::max(1.0, std::abs(sum)))
        throw ComputeError("counting table prefix sums failed verification");
    }
  }

  std::vector<TableEntry> entries_;
  std::vector<std::size_t> prime_count_;
  std::vector<long double> theta_;
  std::vector<long double> psi_;
  double x_max_ = 0.0;
  std::string label_;
  std::optional<double> smallest_prime_;
};

inline CountingTable build_table(const PrimeSystem& system, double x_max, EnumerationOptions options = {}) {
  return CountingTable::build(system, x_max, options);
}

/// CSV with columns value,N,pi,theta,psi on `grid`, 12 significant digits.
inline void write_counting_csv(std::ostream& out, const CountingTable& table, std::span<const double> grid) {
  out << "value,N,pi,theta,psi\n";
  char buf[160];
  for (double x : grid) {
    const Counts c = table.below(x);
    std::snprintf(buf, sizeof buf, "%.12g,%zu,%zu,%.12g,%.12g\n", x, c.n, c.pi, c.theta, c.psi);
    out << buf;
  }
}

/// pi(x) rebuilt from theta by partial summation:
///   pi(x) = theta(x)/log x + int_{p1}^{x} theta(t) / (t log^2 t) dt.
/// theta is constant between consecutive primes, so the integral is taken
/// piece by piece with adaptive Simpson.
inline double pi_from_theta(const CountingTable& table, double x, double tol = 1e-12) {
  const Counts at_x = table.below(x);
  const std::vector<double> primes = table.prime_values();
  if (primes.empty() || !(x > primes.front())) return 0.0;
  long double integral = 0.0L;
  for (std::size_t j = 0; j < primes.size() && primes[j] < x; ++j) {
    const double lo = primes[j];
    const double hi = j + 1 < primes.size() ? std::min(primes[j + 1], x) : x;
    if (!(hi > lo)) continue;
    // theta on (p_j, p_{j+1}] counts every prime up to and including p_j.
    const double level = table.below(hi).theta;
    const auto integrand = [level](double t) {
      const double l = std::log(t);
      return level / (t * l * l);
    };
    integral += quadrature::adaptive_simpson(integrand, lo, hi, tol);
  }
  return at_x.theta / std::log(x) + static_cast<double>(integral);
}

}  // namespace beurling

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "beurling/element.hpp"
#include "beurling/error.hpp"
#include "beurling/prime_system.hpp"

namespace beurling {

struct EnumerationOptions {
  /// Hard cap on the number of yielded elements.
  std::size_t max_elements = 100'000'000;
};

/// Streams the generalized integers below `x_max` in enumeration order
/// (nondecreasing log_value, ties by lexicographic exponent vector).
///
/// Min-heap merge seeded with the unit. Popping e pushes e * p_i for every
/// i >= max_index(e) that stays below the cutoff, so each monoid element has
/// exactly one generating parent and no dedup set is needed.
class Enumerator {
 public:
  Enumerator(const PrimeSystem& system, double x_max, EnumerationOptions options = {})
      : system_(&system), cutoff_(x_max), options_(options) {
    if (!(x_max > 1.0) || !std::isfinite(x_max)) throw ComputeError("enumeration cutoff must be a finite value > 1");
    system.require_coverage(x_max);
    heap_.emplace_back();
  }

  std::optional<Element> next() {
    if (heap_.empty()) return std::nullopt;
    if (yielded_ == options_.max_elements)
      throw ComputeError("enumeration exceeded the element cap of " + std::to_string(options_.max_elements));
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Element e = std::move(heap_.back());
    heap_.pop_back();
    push_children(e);
    ++yielded_;
    return e;
  }

  std::size_t yielded() const { return yielded_; }

 private:
  struct Later {
    bool operator()(const Element& a, const Element& b) const { return precedes(b, a); }
  };

  void push_children(const Element& e) {
    const auto primes = system_->primes();
    const auto logs = system_->log_primes();
    const std::size_t first = e.is_unit() ? 0 : e.max_index();
    for (std::size_t i = first; i < primes.size(); ++i) {
      Element child = e.times(static_cast<std::uint32_t>(i), logs);
      // Candidates are nondecreasing in i, so the first one clearly past the
      // cutoff ends the scan.
      if (cutoff_.definitely_above(child.log_value())) break;
      if (!cutoff_.admits(child.log_value(), child.factors(), primes)) continue;
      heap_.push_back(std::move(child));
      std::push_heap(heap_.begin(), heap_.end(), Later{});
    }
  }

  const PrimeSystem* system_;
  Cutoff cutoff_;
  EnumerationOptions options_;
  std::vector<Element> heap_;
  std::size_t yielded_ = 0;
};

inline std::vector<Element> enumerate(const PrimeSystem& system, double x_max, EnumerationOptions options = {}) {
  Enumerator it(system, x_max, options);
  std::vector<Element> out;
  while (auto e = it.next()) out.push_back(std::move(*e));
  return out;
}

}  // namespace beurling

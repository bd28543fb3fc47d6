#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "beurling/error.hpp"
#include "beurling/prime_system.hpp"

namespace beurling {

/// Rational primes strictly below `limit`.
inline std::vector<std::uint64_t> sieve_primes(double limit) {
  if (!(limit > 2.0)) return {};
  const auto n = static_cast<std::uint64_t>(std::ceil(limit)) - 1;  // largest integer < limit
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

/// A recipe for a built-in prime system.
struct SystemRecipe {
  enum class Kind { empty, classical, single, explicit_list, random_logintegral, perturbed_classical };

  Kind kind = Kind::classical;
  double x_max = 1e6;                 // classical, random_logintegral, perturbed_classical
  double prime = 2.0;                 // single
  std::vector<double> primes;         // explicit_list
  std::uint64_t seed = 0;             // random kinds
  double deletion_rate = 0.0;         // perturbed_classical

  static SystemRecipe empty_system() { return with_kind(Kind::empty); }
  static SystemRecipe classical(double x_max) {
    SystemRecipe r = with_kind(Kind::classical);
    r.x_max = x_max;
    return r;
  }
  static SystemRecipe single(double p) {
    SystemRecipe r = with_kind(Kind::single);
    r.prime = p;
    return r;
  }
  static SystemRecipe explicit_list(std::vector<double> primes) {
    SystemRecipe r = with_kind(Kind::explicit_list);
    r.primes = std::move(primes);
    return r;
  }
  static SystemRecipe random_logintegral(std::uint64_t seed, double x_max) {
    SystemRecipe r = with_kind(Kind::random_logintegral);
    r.seed = seed;
    r.x_max = x_max;
    return r;
  }
  static SystemRecipe perturbed_classical(std::uint64_t seed, double rate, double x_max) {
    SystemRecipe r = with_kind(Kind::perturbed_classical);
    r.seed = seed;
    r.deletion_rate = rate;
    r.x_max = x_max;
    return r;
  }

  /// Canonical one-line description, echoed into report metadata.
  std::string describe() const {
    char buf[160];
    switch (kind) {
      case Kind::empty: return "empty";
      case Kind::classical:
        std::snprintf(buf, sizeof buf, "classical(x_max=%.12g)", x_max);
        return buf;
      case Kind::single:
        std::snprintf(buf, sizeof buf, "single(p=%.17g)", prime);
        return buf;
      case Kind::explicit_list: {
        std::string s = "explicit(";
        for (std::size_t i = 0; i < primes.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", primes[i]);
          s += buf;
        }
        return s + ")";
      }
      case Kind::random_logintegral:
        std::snprintf(buf, sizeof buf, "random_logintegral(seed=%llu,x_max=%.12g)",
                      static_cast<unsigned long long>(seed), x_max);
        return buf;
      case Kind::perturbed_classical:
        std::snprintf(buf, sizeof buf, "perturbed_classical(seed=%llu,deletion_rate=%.12g,x_max=%.12g)",
                      static_cast<unsigned long long>(seed), deletion_rate, x_max);
        return buf;
    }
    return "unknown";
  }

 private:
  static SystemRecipe with_kind(Kind k) {
    SystemRecipe r;
    r.kind = k;
    return r;
  }
};

namespace detail {

// 53-bit uniform in [0, 1) from the raw engine output; the std distributions
// are implementation-defined and would make outputs toolchain dependent.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

inline PrimeSystem make_system(const SystemRecipe& r) {
  using Kind = SystemRecipe::Kind;
  const auto needs_range = [&] {
    if (!(r.x_max > 2.0) || !std::isfinite(r.x_max)) throw InputError("recipe x_max must be a finite value > 2");
  };
  const std::string label = r.describe();
  switch (r.kind) {
    case Kind::empty: return PrimeSystem({}, label, {Provenance::Kind::catalog, label, std::nullopt});
    case Kind::classical: {
      needs_range();
      std::vector<double> primes;
      for (auto p : sieve_primes(r.x_max)) primes.push_back(static_cast<double>(p));
      return PrimeSystem(std::move(primes), label, {Provenance::Kind::catalog, label, std::nullopt}, r.x_max);
    }
    case Kind::single:
      if (!(r.prime > 1.0) || !std::isfinite(r.prime)) throw InputError("single prime must be a finite value > 1");
      return PrimeSystem({r.prime}, label, {Provenance::Kind::catalog, label, std::nullopt});
    case Kind::explicit_list:
      return PrimeSystem(r.primes, label, {Provenance::Kind::catalog, label, std::nullopt});
    case Kind::random_logintegral: {
      needs_range();
      // Rate-1 homogeneous process on (e, x_max) thinned by 1/log t <= 1.
      std::mt19937_64 rng(r.seed);
      std::vector<double> primes;
      double t = std::exp(1.0);
      for (;;) {
        t += -std::log1p(-detail::uniform01(rng));
        if (t >= r.x_max) break;
        if (detail::uniform01(rng) < 1.0 / std::log(t)) primes.push_back(t);
      }
      return PrimeSystem(std::move(primes), label, {Provenance::Kind::random, label, r.seed}, r.x_max);
    }
    case Kind::perturbed_classical: {
      needs_range();
      if (!(r.deletion_rate >= 0.0 && r.deletion_rate <= 1.0)) throw InputError("deletion rate must lie in [0, 1]");
      std::mt19937_64 rng(r.seed);
      std::vector<double> primes;
      for (auto p : sieve_primes(r.x_max))
        if (!(detail::uniform01(rng) < r.deletion_rate)) primes.push_back(static_cast<double>(p));
      return PrimeSystem(std::move(primes), label, {Provenance::Kind::random, label, r.seed}, r.x_max);
    }
  }
  throw InputError("unknown recipe kind");
}

}  // namespace beurling

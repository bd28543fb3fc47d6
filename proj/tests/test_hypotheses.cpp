#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include "beurling/catalog.hpp"
#include "beurling/hypotheses.hpp"
#include "oracles.hpp"

using namespace beurling;

namespace {

const CountingTable& classical_1e6() {
  static const CountingTable table = build_table(make_system(SystemRecipe::classical(1e6)), 1e6);
  return table;
}

const CountingTable& classical_1e4() {
  static const CountingTable table = build_table(make_system(SystemRecipe::classical(1e4)), 1e4);
  return table;
}

// Classical N(x) = ceil(x) - 1, independent of the table.
double classical_N(double x) { return std::ceil(x) - 1.0; }

// int_lo^hi |N(x) - a x| / x^2 by composite Simpson on every unit piece
// (n, n+1], where the classical N is the constant n.
double l1_oracle_classical(double a, double lo, double hi) {
  double sum = 0.0;
  for (double n = std::floor(lo); n < hi; n += 1.0) {
    const double l = std::max(lo, n), r = std::min(hi, n + 1.0);
    if (!(r > l)) continue;
    const double c = n;  // N on (n, n+1]
    const double cross = c / a;
    auto f = [&](double x) { return std::abs(c - a * x) / (x * x); };
    const int panels = n < 64 ? 4096 : 64;
    if (cross > l && cross < r)
      sum += oracle::simpson(f, l, cross, panels) + oracle::simpson(f, cross, r, panels);
    else
      sum += oracle::simpson(f, l, r, panels);
  }
  return sum;
}

// Dense scan of |N(x) - a x| log^g x / x using the classical closed form,
// probing every integer from both sides.
double dense_scan_classical(double a, double gamma, double lo, double hi) {
  const auto f = [&](double x, double n) { return std::abs(n - a * x) * std::pow(std::log(x), gamma) / x; };
  double best = 0.0;
  for (double n = std::ceil(lo); n <= hi; n += 1.0) {
    best = std::max(best, f(n, n - 1.0));  // left limit (and value) at n
    if (n < hi) best = std::max(best, f(n, n));  // right limit
  }
  for (int k = 0; k <= 20000; ++k) {
    const double x = lo * std::pow(hi / lo, k / 20000.0);
    best = std::max(best, f(x, classical_N(x)));
  }
  return best;
}

}  // namespace

TEST(Density, ClassicalMethods) {
  const CountingTable& table = classical_1e6();
  EXPECT_EQ(estimate_density(table, DensityMethod::known_exact, 1.0).a, 1.0);
  const DensityEstimate ratio = estimate_density(table, DensityMethod::final_ratio);
  EXPECT_EQ(ratio.a, 999999.0 / 1e6);
  EXPECT_EQ(ratio.method, DensityMethod::final_ratio);
  EXPECT_NEAR(estimate_density(table, DensityMethod::regression).a, 1.0, 1e-4);
}

TEST(Density, Errors) {
  const CountingTable single = build_table(PrimeSystem({2}, "two"), 1e6);
  EXPECT_THROW(estimate_density(single, DensityMethod::final_ratio), ComputeError);
  EXPECT_THROW(estimate_density(single, DensityMethod::regression), ComputeError);
  const CountingTable short_range = build_table(make_system(SystemRecipe::classical(150)), 150);
  EXPECT_THROW(estimate_density(short_range, DensityMethod::final_ratio), ComputeError);
  EXPECT_THROW(estimate_density(classical_1e4(), DensityMethod::known_exact), ComputeError);
  EXPECT_THROW(estimate_density(classical_1e4(), DensityMethod::known_exact, -1.0), ComputeError);
  EXPECT_THROW(parse_density_method("median"), InputError);
  EXPECT_EQ(parse_density_method("regression"), DensityMethod::regression);
}

TEST(L1Profile, ClassicalBoundsAndOracle) {
  const CountingTable& table = classical_1e6();
  const std::vector<double> checkpoints = decade_checkpoints(1e6);
  ASSERT_EQ(checkpoints, (std::vector<double>{10, 100, 1e3, 1e4, 1e5, 1e6}));
  const L1Profile profile = l1_condition_profile(table, 1.0, checkpoints);
  ASSERT_EQ(profile.values.size(), 6u);
  ASSERT_EQ(profile.tails.size(), 5u);
  double previous = 0.0;
  for (const auto& [X, v] : profile.values) {
    EXPECT_LE(v, 1.0);
    EXPECT_GE(v, previous);
    previous = v;
  }
  for (std::size_t i = 0; i < profile.tails.size(); ++i) {
    const auto& [x1, x2, tail] = profile.tails[i];
    EXPECT_LE(tail, 1.0 / x1);
    EXPECT_NEAR(profile.values[i + 1].second, profile.values[i].second + tail, 1e-12);
  }
  EXPECT_LE(l1_integral(table, 1.0, 1e4, 1e6), 1e-4);
  for (double X : {10.0, 1000.0, 1e4}) EXPECT_NEAR(l1_integral(table, 1.0, 1.0, X), l1_oracle_classical(1.0, 1.0, X), 1e-9);
  EXPECT_NEAR(l1_integral(table, 0.9, 2.5, 5000.0), l1_oracle_classical(0.9, 2.5, 5000.0), 1e-9);
}

TEST(L1Profile, SinglePrimeDiverges) {
  const CountingTable table = build_table(PrimeSystem({2}, "two"), 1e6);
  const L1Profile profile = l1_condition_profile(table, 1.0, decade_checkpoints(1e6));
  // |N - x|/x^2 = 1/x - N/x^2 with N ~ log2 x, so each decade adds log 10
  // minus a term of order log X / X.
  for (std::size_t i = 3; i < profile.values.size(); ++i) {
    const double step = profile.values[i].second - profile.values[i - 1].second;
    EXPECT_NEAR(step, std::log(10.0), 0.02);
  }
  // Oracle: Simpson in u = log x on the pieces between powers of two.
  double oracle_value = 0.0;
  for (int m = 0; std::ldexp(1.0, m) < 1e4; ++m) {
    const double lo = std::ldexp(1.0, m), hi = std::min(std::ldexp(1.0, m + 1), 1e4);
    const double n = m + 1;
    oracle_value += oracle::simpson([&](double u) { const double x = std::exp(u); return std::abs(n - x) / x; },
                                    std::log(lo), std::log(hi), 2000);
  }
  EXPECT_NEAR(l1_integral(table, 1.0, 1.0, 1e4), oracle_value, 1e-8);
}

TEST(L1Profile, Errors) {
  const std::vector<double> bad_order = {100, 10};
  const std::vector<double> out_of_range = {2e4};
  EXPECT_THROW(l1_condition_profile(classical_1e4(), 1.0, bad_order), ComputeError);
  EXPECT_THROW(l1_condition_profile(classical_1e4(), 1.0, out_of_range), ComputeError);
  const std::vector<double> ok = {100};
  EXPECT_THROW(l1_condition_profile(classical_1e4(), 0.0, ok), ComputeError);
}

TEST(LogErrorSup, ClassicalMatchesDenseScan) {
  const CountingTable& table = classical_1e4();
  const std::vector<double> grid = GridSpec{3.0, 1e4, 50}.points();
  const SupResult r = log_error_sup(table, 1.0, 1.0, grid);
  EXPECT_LT(r.sup, 1.0);
  EXPECT_NEAR(r.sup, dense_scan_classical(1.0, 1.0, 3.0, 1e4), 1e-12);
  EXPECT_NEAR(r.sup, std::log(3.0) / 3.0, 1e-12);  // N(3) = 2 at the jump x = 3
  EXPECT_EQ(r.argmax, 3.0);
  const SupResult shifted = log_error_sup(table, 0.95, 2.0, grid);
  EXPECT_NEAR(shifted.sup, dense_scan_classical(0.95, 2.0, 3.0, 1e4), 1e-9);
}

TEST(LogErrorSup, GammaZeroIsPlainRelativeError) {
  const CountingTable& table = classical_1e4();
  const std::vector<double> grid = GridSpec{10.0, 1e4, 20}.points();
  const SupResult r = log_error_sup(table, 1.0, 0.0, grid);
  double expected = 0.0;
  for (double n = 10; n <= 1e4; n += 1.0) expected = std::max(expected, 1.0 / n);
  EXPECT_NEAR(r.sup, expected, 1e-15);
}

TEST(LogErrorSup, SinglePrimeGrows) {
  const CountingTable small = build_table(PrimeSystem({2}, "two"), 1e3);
  const CountingTable large = build_table(PrimeSystem({2}, "two"), 1e6);
  const double s1 = log_error_sup(small, 1.0, 1.0, GridSpec{3.0, 1e3, 20}.points()).sup;
  const double s2 = log_error_sup(large, 1.0, 1.0, GridSpec{3.0, 1e6, 20}.points()).sup;
  EXPECT_GT(s2, s1 + 5.0);
  EXPECT_NEAR(s2, std::log(1e6) * (1.0 - 20.0 / 1e6), 1e-3);
}

TEST(LogErrorSup, RefiningGridDoesNotRaiseSup) {
  const CountingTable table = build_table(make_system(SystemRecipe::random_logintegral(5, 5e4)), 5e4);
  const double a = estimate_density(table, DensityMethod::final_ratio).a;
  const double coarse = log_error_sup(table, a, 1.0, GridSpec{5.0, 5e4, 5}.points()).sup;
  const double fine = log_error_sup(table, a, 1.0, GridSpec{5.0, 5e4, 2000}.points()).sup;
  EXPECT_LE(fine, coarse * (1 + 1e-12));
  EXPECT_GE(fine, coarse * (1 - 1e-12));
}

TEST(LogErrorSup, Errors) {
  const std::vector<double> empty;
  const std::vector<double> below_e = {2.0, 10.0};
  EXPECT_THROW(log_error_sup(classical_1e4(), 1.0, 1.0, empty), ComputeError);
  EXPECT_THROW(log_error_sup(classical_1e4(), 1.0, 1.0, below_e), ComputeError);
}

TEST(LogErrorSup, MinimizingDensityNearOne) {
  const CountingTable table = build_table(make_system(SystemRecipe::classical(1e5)), 1e5);
  const std::vector<double> grid = GridSpec{100.0, 1e5, 20}.points();
  double best_a = 0.0, best = INFINITY;
  for (int k = 0; k <= 200; ++k) {
    const double a = 0.9 + 0.001 * k;
    const double s = log_error_sup(table, a, 1.0, grid).sup;
    if (s < best) best = s, best_a = a;
  }
  EXPECT_NEAR(best_a, 1.0, 0.01);
}

TEST(Chebyshev, ClassicalRatios) {
  const CountingTable& table = classical_1e6();
  const std::vector<double> grid = GridSpec{100.0, 1e6, 200}.points();
  const ChebyshevRatios r = chebyshev_ratios(table, grid);
  EXPECT_LE(r.pi_ratio.sup, 1.3);
  EXPECT_LE(r.psi_ratio.sup, 1.1);
  // Sieve oracle: right limits at every prime in range.
  const auto primes = oracle::trial_division_primes(1000000);
  double pi_best = 0.0;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const double p = static_cast<double>(primes[k]);
    if (p >= 100.0) pi_best = std::max(pi_best, (k + 1) * std::log(p) / p);
  }
  pi_best = std::max(pi_best, 25 * std::log(100.0) / 100.0);
  EXPECT_NEAR(r.pi_ratio.sup, pi_best, 1e-12);
  EXPECT_EQ(r.pi_ratio.argmax, 113.0);
}

TEST(Chebyshev, EmptySystemIsZero) {
  const CountingTable table = build_table(PrimeSystem(), 1e3);
  const ChebyshevRatios r = chebyshev_ratios(table, GridSpec{5.0, 1e3, 10}.points());
  EXPECT_EQ(r.pi_ratio.sup, 0.0);
  EXPECT_EQ(r.psi_ratio.sup, 0.0);
}

TEST(Chebyshev, PiBoundedByPsiOnCatalogSystems) {
  const std::vector<PrimeSystem> systems = {make_system(SystemRecipe::classical(1e5)),
                                            make_system(SystemRecipe::random_logintegral(8, 1e5)),
                                            make_system(SystemRecipe::perturbed_classical(2, 0.4, 1e5))};
  for (const PrimeSystem& system : systems) {
    const CountingTable table = build_table(system, 1e5);
    for (double x : GridSpec{3.0, 1e5, 100}.points()) {
      const Counts c = table.below(x);
      const double lhs = c.pi * std::log(x) / x;
      const double rhs = c.psi / x * (std::log(x) / std::log(std::sqrt(x))) + std::log(x) / std::sqrt(x);
      EXPECT_LE(lhs, rhs + 1e-12) << system.label() << " x=" << x;
    }
  }
}

TEST(Report, JsonKeysExactly) {
  const CountingTable& table = classical_1e4();
  const HypothesisReport report =
      make_report(table, {1.0, DensityMethod::known_exact}, decade_checkpoints(1e4), 1.0, GridSpec{100.0, 1e4, 20});
  const nlohmann::json j = to_json(report);
  std::set<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.insert(k);
  EXPECT_EQ(keys, (std::set<std::string>{"label", "a_estimate", "a_method", "l1_profile", "l1_tails", "log_error_sup",
                                         "pi_ratio", "psi_ratio", "grid_spec", "x_max"}));
  EXPECT_EQ(j["a_method"], "known-exact");
  EXPECT_EQ(j["log_error_sup"]["gamma"], 1.0);
  EXPECT_TRUE(j["log_error_sup"].contains("argmax"));
  EXPECT_EQ(j["l1_profile"].size(), 4u);
  EXPECT_EQ(j["l1_tails"][0].size(), 3u);
}

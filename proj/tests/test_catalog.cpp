#include <gtest/gtest.h>

#include <cmath>

#include "beurling/catalog.hpp"
#include "oracles.hpp"

using namespace beurling;

TEST(Catalog, ClassicalBelowThirty) {
  const PrimeSystem system = make_system(SystemRecipe::classical(30));
  const std::vector<double> expected = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  EXPECT_EQ(std::vector<double>(system.primes().begin(), system.primes().end()), expected);
  EXPECT_EQ(system.complete_below(), 30.0);
}

TEST(Catalog, SieveMatchesTrialDivision) {
  for (double limit : {3.0, 10.0, 97.0, 97.5, 1000.0, 10000.0}) {
    const auto got = sieve_primes(limit);
    const auto expected = oracle::trial_division_primes(static_cast<std::uint64_t>(std::ceil(limit)));
    EXPECT_EQ(got, expected) << limit;
  }
}

TEST(Catalog, SingleAndExplicit) {
  const PrimeSystem single = make_system(SystemRecipe::single(3));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.primes()[0], 3.0);
  EXPECT_TRUE(single.is_finite_system());
  const PrimeSystem list = make_system(SystemRecipe::explicit_list({1.5, 2, 2, 7}));
  EXPECT_EQ(list.size(), 4u);
  EXPECT_THROW(make_system(SystemRecipe::explicit_list({3, 2})), InputError);
}

TEST(Catalog, RandomIsSeededAndValid) {
  const PrimeSystem a = make_system(SystemRecipe::random_logintegral(1, 1e4));
  const PrimeSystem b = make_system(SystemRecipe::random_logintegral(1, 1e4));
  const PrimeSystem c = make_system(SystemRecipe::random_logintegral(2, 1e4));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.primes()[i], b.primes()[i]);
  EXPECT_FALSE(a.size() == c.size() && std::equal(a.primes().begin(), a.primes().end(), c.primes().begin()));
  EXPECT_GT(a.primes().front(), std::exp(1.0));
  EXPECT_LT(a.primes().back(), 1e4);
  EXPECT_EQ(a.source().seed, std::optional<std::uint64_t>(1));
}

TEST(Catalog, PoissonCountMatchesLogIntegral) {
  const double X = 1e4;
  const double e = std::exp(1.0);
  const double mean = oracle::simpson([](double t) { return 1.0 / std::log(t); }, e, X, 200000);
  const double sd = std::sqrt(mean);
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const double n = static_cast<double>(make_system(SystemRecipe::random_logintegral(seed, X)).size());
    EXPECT_LT(std::abs(n - mean), 4.0 * sd) << "seed " << seed;
    total += n;
  }
  EXPECT_LT(std::abs(total / 50.0 - mean), 4.0 * sd / std::sqrt(50.0));
}

TEST(Catalog, PerturbedClassical) {
  const PrimeSystem classical = make_system(SystemRecipe::classical(5000));
  const PrimeSystem untouched = make_system(SystemRecipe::perturbed_classical(7, 0.0, 5000));
  ASSERT_EQ(untouched.size(), classical.size());
  EXPECT_TRUE(std::equal(untouched.primes().begin(), untouched.primes().end(), classical.primes().begin()));
  EXPECT_TRUE(make_system(SystemRecipe::perturbed_classical(7, 1.0, 5000)).empty());
  const PrimeSystem half = make_system(SystemRecipe::perturbed_classical(7, 0.5, 5000));
  EXPECT_GT(half.size(), classical.size() / 3);
  EXPECT_LT(half.size(), 2 * classical.size() / 3);
}

TEST(Catalog, InvalidParameters) {
  EXPECT_THROW(make_system(SystemRecipe::classical(2)), InputError);
  EXPECT_THROW(make_system(SystemRecipe::single(1)), InputError);
  EXPECT_THROW(make_system(SystemRecipe::perturbed_classical(1, 1.5, 100)), InputError);
  EXPECT_THROW(make_system(SystemRecipe::random_logintegral(1, std::nan(""))), InputError);
}

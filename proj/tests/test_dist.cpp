#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bcv/dist.hpp"
#include "oracles.hpp"

using namespace bcv;

TEST(BinomialLaw, SmallExamples) {
  EXPECT_DOUBLE_EQ(BinomialLaw(2, 0.5).pmf(1), 0.5);
  EXPECT_EQ(BinomialLaw(5, 0.3).pmf(-1), 0.0);
  EXPECT_EQ(BinomialLaw(5, 0.3).pmf(6), 0.0);
  EXPECT_EQ(BinomialLaw(7, 0.0).pmf(0), 1.0);
  EXPECT_EQ(BinomialLaw(7, 0.0).pmf(1), 0.0);
  EXPECT_EQ(BinomialLaw(7, 1.0).pmf(7), 1.0);
  EXPECT_EQ(BinomialLaw(7, 1.0).pmf(6), 0.0);
}

TEST(BinomialLaw, MatchesExactRationalPmf) {
  const oracle::cpp_rational x(3, 10);
  for (int n : {1, 7, 30, 200, 1000}) {
    const BinomialLaw law(n, 0.3);
    for (int k = 0; k <= n; k += std::max(1, n / 37)) {
      const double want = oracle::to_double(oracle::binom_pmf(n, x, k));
      if (want < 1e-290) continue;
      EXPECT_NEAR(law.pmf(k), want, 1e-12 * want) << "n=" << n << " k=" << k;
    }
  }
  const double want = oracle::to_double(oracle::binom_pmf(1000, x, 300));
  EXPECT_NEAR(BinomialLaw(1000, 0.3).pmf(300), want, 1e-12 * want);
}

TEST(BinomialLaw, MassCdfAndMoments) {
  for (int n : {1, 3, 10, 100, 2000, 100000}) {
    for (double x : {1e-5, 0.01, 0.3, 0.5, 0.77, 0.999}) {
      const BinomialLaw law(n, x);
      double s = 0.0, mean = 0.0, prev_cdf = 0.0;
      for (long k = 0; k <= n; ++k) {
        const double p = law.pmf(k);
        ASSERT_GE(p, 0.0);
        s += p;
        mean += k * p;
      }
      EXPECT_NEAR(s, 1.0, 1e-12) << n << " " << x;
      EXPECT_NEAR(mean, n * x, 1e-10 * std::max(1.0, n * x));
      for (long k = 0; k <= n; k += std::max<long>(1, n / 50)) {
        const double c = law.cdf(k);
        EXPECT_GE(c, prev_cdf - 1e-15);
        prev_cdf = c;
      }
      EXPECT_EQ(law.cdf(n), 1.0);
    }
  }
}

TEST(BinomialLaw, RejectsBadArguments) {
  EXPECT_THROW(BinomialLaw(5, -0.1), DomainError);
  EXPECT_THROW(BinomialLaw(5, 1.1), DomainError);
  EXPECT_THROW(BinomialLaw(-1, 0.5), DomainError);
  EXPECT_THROW(PoissonLaw(-1.0), DomainError);
  EXPECT_THROW(law_pmf(BinomialLaw(3, 0.5), -1), DomainError);
}

TEST(PoissonLaw, MatchesHighPrecisionPmf) {
  EXPECT_EQ(PoissonLaw(0.0).pmf(0), 1.0);
  EXPECT_EQ(PoissonLaw(0.0).pmf(3), 0.0);
  for (double l : {0.001, 0.5, 1.0, 3.7, 25.0, 100.0}) {
    const PoissonLaw law(l);
    for (int k : {0, 1, 2, 3, 5, 10, 30, 100, 160}) {
      const double want = oracle::poisson_pmf(l, k);
      if (want < 1e-290) continue;
      EXPECT_NEAR(law.pmf(k), want, 1e-12 * want) << "lambda=" << l << " k=" << k;
    }
  }
}

TEST(PoissonLaw, TruncatedMassIsOne) {
  for (double l : {0.0, 0.2, 1.0, 7.5, 40.0, 100.0}) {
    const PoissonLaw law(l);
    const long hi = static_cast<long>(std::ceil(l)) + static_cast<long>(std::ceil(40.0 * std::sqrt(l + 1.0))) + 40;
    EXPECT_EQ(law.truncation_hi(), hi);
    double s = 0.0;
    for (long k = 0; k <= hi; ++k) s += law.pmf(k);
    EXPECT_NEAR(s, 1.0, 1e-12) << l;
  }
}

TEST(ContinuousHelpers, TriangularAndBeta) {
  EXPECT_EQ(TriangularV::density(0.5), 0.5);
  EXPECT_EQ(TriangularV::density(1.5), 0.5);
  EXPECT_EQ(TriangularV::density(2.5), 0.0);
  EXPECT_NEAR(oracle::gk([](double v) { return TriangularV::density(v); }, {0, 1, 2}), 1.0, 1e-14);
  EXPECT_NEAR(oracle::gk([](double v) { return v * TriangularV::density(v); }, {0, 1, 2}), 1.0, 1e-14);
  for (int m : {1, 2, 3, 7}) {
    const BetaOneM b(m);
    EXPECT_NEAR(oracle::gk([&](double t) { return b.density(t); }, {0, 1}), 1.0, 1e-13);
    EXPECT_NEAR(oracle::gk([&](double t) { return t * b.density(t); }, {0, 1}), 1.0 / (m + 1), 1e-13);
    EXPECT_NEAR(oracle::gk([&](double t) { return t * t * b.density(t); }, {0, 1}), 2.0 / ((m + 1.0) * (m + 2.0)), 1e-13);
  }
  EXPECT_THROW(BetaOneM(0), DomainError);
}

TEST(TotalVariation, Properties) {
  EXPECT_EQ(tv_distance(BinomialLaw(10, 0.2), BinomialLaw(10, 0.2)), 0.0);
  for (double l : {0.1, 1.0, 4.0}) {
    EXPECT_NEAR(tv_distance(PoissonLaw(0.0), PoissonLaw(l)), 1.0 - std::exp(-l), 1e-14);
  }
  const BinomialLaw a(30, 0.1);
  const PoissonLaw b(3.0);
  const BinomialLaw c(60, 0.05);
  EXPECT_DOUBLE_EQ(tv_distance(a, b), tv_distance(b, a));
  EXPECT_LE(tv_distance(a, c), tv_distance(a, b) + tv_distance(b, c) + 1e-15);
  EXPECT_GE(tv_distance(a, b), 0.0);
  EXPECT_LE(tv_distance(a, b), 1.0);
}

TEST(TotalVariation, BoundDominatesExactDistance) {
  EXPECT_EQ(tv_binom_poisson_bound(10, 0.0), 0.0);
  EXPECT_NEAR(tv_binom_poisson_bound(100, 1.0), 0.01 * (std::sqrt(2.0) / 4.0 + 4.0 / 11.0 * 7.0 / 100.0), 1e-16);
  EXPECT_NEAR(tv_binom_poisson_bound(100, 1.0), 0.0037900794, 1e-10);
  EXPECT_GE(tv_binom_poisson_bound(10, 1.0), tv_distance(BinomialLaw(10, 0.1), PoissonLaw(1.0)));
  for (int n : {10, 20, 50, 100}) {
    for (double l : {0.5, 1.0, 2.0, 5.0}) {
      if (l > n / 2.0) continue;
      // Exact distance from 50-digit pmfs, independent of the library's log-space forms.
      double s = 0.0;
      const oracle::cpp_rational x = oracle::cpp_rational(static_cast<long>(l * 2), 2 * n);
      for (int k = 0; k <= 200; ++k) {
        const double pb = k <= n ? oracle::to_double(oracle::binom_pmf(n, x, k)) : 0.0;
        s += std::abs(pb - oracle::poisson_pmf(l, k));
      }
      const double tv = 0.5 * s;
      EXPECT_NEAR(tv_distance(BinomialLaw(n, l / n), PoissonLaw(l)), tv, 1e-13);
      EXPECT_LE(tv, tv_binom_poisson_bound(n, l)) << "n=" << n << " lambda=" << l;
    }
  }
  EXPECT_THROW(tv_binom_poisson_bound(9, 1.0), PreconditionError);
}

TEST(StirlingMode, Examples) {
  EXPECT_TRUE(stirling_mode_bound_check(2, 1));
  EXPECT_NEAR(std::sqrt(2.0) / std::sqrt(2.0 * std::numbers::pi), 0.5641, 1e-4);
  EXPECT_TRUE(stirling_mode_bound_check(100, 50));
  EXPECT_TRUE(stirling_mode_bound_check(200, 1));
  EXPECT_THROW(stirling_mode_bound_check(5, 0), PreconditionError);
  EXPECT_THROW(stirling_mode_bound_check(5, 5), PreconditionError);
}

TEST(StirlingMode, HoldsForAllSmallN) {
  for (int n = 2; n <= 200; ++n)
    for (int m = 1; m < n; ++m) ASSERT_TRUE(stirling_mode_bound_check(n, m)) << n << " " << m;
}

TEST(InverseMoment, EndpointsAndQuadratureOracle) {
  EXPECT_NEAR(inv_moment_shift_V(0.0), std::log(4.0), 1e-12);
  EXPECT_NEAR(inv_moment_shift_V(1.0), std::log(27.0 / 16.0), 1e-12);
  for (double y : {0.0, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    const double q = oracle::gk([y](double v) { return std::min(v, 2.0 - v) / (y + v); }, {0, 1, 2});
    EXPECT_NEAR(inv_moment_shift_V(y), q, 1e-10) << y;
  }
  // Stable evaluation keeps full relative accuracy where the literal closed form cancels.
  for (double y : {1e-8, 0.3, 3.0, 1e3, 1e6, 1e9}) {
    const double want = oracle::inv_moment_V(y);
    EXPECT_NEAR(inv_moment_shift_V(y), want, 1e-13 * want) << y;
  }
  EXPECT_THROW(inv_moment_shift_V(-1e-3), DomainError);
}

TEST(InverseMoment, EnvelopeAndMonotone) {
  double prev = INFINITY;
  for (double y = 0.01; y < 1e4; y *= 1.3) {
    const double v = inv_moment_shift_V(y);
    EXPECT_LT(v, prev);
    EXPECT_GE(v, 1.0 / (y + 2.0));
    EXPECT_LE(v, 1.0 / y);
    prev = v;
  }
}

TEST(Sampling, DegenerateAndMeans) {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(BinomialLaw(1, 1.0), rng), 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(BinomialLaw(9, 0.0), rng), 0);

  const long draws = 1000000;
  double s = 0.0;
  for (long i = 0; i < draws; ++i) s += sample(TriangularV{}, rng);
  EXPECT_NEAR(s / draws, 1.0, 4.0 * std::sqrt(1.0 / 6.0) / 1000.0);

  s = 0.0;
  const BetaOneM b3(3);
  for (long i = 0; i < draws; ++i) s += sample(b3, rng);
  EXPECT_NEAR(s / draws, 0.25, 4.0 * std::sqrt(b3.variance() / draws));

  for (auto [n, x] : {std::pair{40, 0.05}, std::pair{1000, 0.4}, std::pair{300, 0.9}}) {
    const BinomialLaw law(n, x);
    const long t = 200000;
    double m = 0.0;
    for (long i = 0; i < t; ++i) {
      const long k = sample(law, rng);
      ASSERT_GE(k, 0);
      ASSERT_LE(k, n);
      m += static_cast<double>(k);
    }
    EXPECT_NEAR(m / t, law.mean(), 4.0 * std::sqrt(law.variance() / t)) << n << " " << x;
  }
}

TEST(Sampling, BinomialFrequenciesMatchPmf) {
  // Chi-square style check on a small law: every cell within 5 s.e.
  Rng rng(7);
  const BinomialLaw law(6, 0.35);
  const long t = 400000;
  std::vector<long> counts(7, 0);
  for (long i = 0; i < t; ++i) counts[static_cast<std::size_t>(sample(law, rng))]++;
  for (int k = 0; k <= 6; ++k) {
    const double p = law.pmf(k);
    EXPECT_NEAR(static_cast<double>(counts[k]) / t, p, 5.0 * std::sqrt(p * (1 - p) / t)) << k;
  }
}

TEST(Rng, SplitStreamsAreDeterministic) {
  const Rng master(99);
  Rng a = master.split(3), b = master.split(3), c = master.split(4);
  for (int i = 0; i < 10; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
  }
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bcv/central.hpp"
#include "bcv/corpus.hpp"
#include "bcv/tolerances.hpp"
#include "oracles.hpp"

using namespace bcv;
using oracle::cpp_rational;

namespace {

// phi(x) sqrt(n) sum_k pmf(k) |k - nx| (E 1/(k+V) + E 1/(n-k+V)), exact pmf at rational x.
double H_oracle(int n, const cpp_rational& x) {
  oracle::hp s = 0;
  const cpp_rational lambda = x * n;
  for (int k = 0; k <= n; ++k) {
    cpp_rational d = cpp_rational(k) - lambda;
    if (d < 0) d = -d;
    s += oracle::hp(oracle::binom_pmf(n, x, k) * d) * (oracle::inv_moment_V(k) + oracle::inv_moment_V(n - k));
  }
  return oracle::to_double(sqrt(oracle::hp(x * (1 - x))) * sqrt(oracle::hp(n)) * s);
}

}  // namespace

TEST(In, Examples) {
  EXPECT_NEAR(I_n_brute(1, 0.5), 0.1875, 1e-15);
  EXPECT_NEAR(I_n_closed(1, 0.5), 0.1875, 1e-15);
  EXPECT_NEAR(I_n_closed(50, 0.1), I_n_brute(50, 0.1), 1e-11 * I_n_brute(50, 0.1));
  EXPECT_NEAR(I_n_closed(200, 0.5), I_n_brute(200, 0.5), 1e-11 * I_n_brute(200, 0.5));
  EXPECT_NEAR(I_n_brute(3, 0.5), oracle::I_n(3, cpp_rational(1, 2)), 1e-15);
  EXPECT_LT(I_n_brute(1, 1e-12), 1e-5);
  EXPECT_THROW(I_n_closed(10, 0.0), DomainError);
  EXPECT_THROW(I_n_closed(10, 1.0), DomainError);
}

TEST(In, ClosedFormMatchesExactOracle) {
  for (int n : {1, 2, 7, 30, 100, 300})
    for (int p = 1; p <= 50; p += (n > 100 ? 7 : 1)) {
      const cpp_rational x(p, 100);
      const double want = oracle::I_n(n, x);
      EXPECT_NEAR(I_n_closed(n, p / 100.0), want, 1e-11 * want) << n << " " << p;
      EXPECT_NEAR(I_n_brute(n, p / 100.0), want, 1e-11 * want) << n << " " << p;
      EXPECT_GE(I_n_brute(n, p / 100.0), 0.0);
    }
}

TEST(Nu, Examples) {
  EXPECT_NEAR(nu(1.0), 4.0 * std::exp(-1.0) - 1.0, 1e-14);
  EXPECT_NEAR(nu(1.0), 0.4715177647, 1e-10);
  EXPECT_LT(nu(0.001), 0.05);
  EXPECT_GT(nu(0.001), 0.0);
  EXPECT_NEAR(nu(1e4), std::sqrt(2.0 / std::numbers::pi), 0.02);
  EXPECT_THROW(nu(0.0), DomainError);
  EXPECT_THROW(nu(-1.0), DomainError);
}

TEST(Nu, IsLimitOfIn) {
  // I_n(lambda/n) -> nu(lambda) as n grows.
  for (double l : {0.5, 2.5, 7.0}) {
    const int n = 100000;
    EXPECT_NEAR(I_n_closed(n, l / n), nu(l), 5e-4) << l;
  }
}

TEST(CFunctions, Examples) {
  EXPECT_EQ(r_of_lambda(0.0), 0.0);
  EXPECT_EQ(C_of_lambda(0.0), 0.0);
  EXPECT_NEAR(r_of_lambda(1.5), 0.13928876191795099, 1e-15);
  EXPECT_NEAR(C_tilde(1.5), 0.97648579194122758, 1e-14);
  for (double l : {1.4, 1.49, 1.51, 1.6, 3.0}) EXPECT_LT(r_of_lambda(l), r_of_lambda(1.5));
  const double c = 2.0 * std::log(27.0 / 16.0);
  for (double l : {0.3, 1.0, 2.7, 9.9}) EXPECT_NEAR(C_of_lambda(l), c * nu(l) + r_of_lambda(l), 1e-15);
}

TEST(CentralParams, FromC) {
  const CentralParams p = CentralParams::from_c(0.8);
  EXPECT_NEAR(std::sqrt(2.0 / std::numbers::pi) + 1.0 / std::sqrt(p.lambda0), 0.8, 1e-12);
  EXPECT_GT(p.lambda0, 2.2e5);
  EXPECT_LT(p.lambda0, 2.3e5);
}

TEST(SupC, ValueAndCertificate) {
  const SupSearchResult r = sup_C();
  EXPECT_NEAR(r.sup_value, tolerances::sup_C_target, tolerances::sup_C);
  EXPECT_GE(r.sup_value, 0.975);
  EXPECT_LE(r.sup_value, 0.986);
  EXPECT_LT(r.sup_value, tolerances::sup_below);
  EXPECT_NEAR(C_of_lambda(r.arg), r.sup_value, 1e-15);
  EXPECT_TRUE(r.tail_certified);
  EXPECT_FALSE(r.tail_certificate.empty());
  EXPECT_GE(r.sup_value, r.coarse_value);
  // A dense independent scan never exceeds the refined value.
  double scan = 0.0;
  for (int i = 1; i <= 200000; ++i) scan = std::max(scan, C_of_lambda(60.0 * i / 200000.0));
  EXPECT_LE(scan, r.sup_value + 1e-12);
  EXPECT_GT(scan, r.sup_value - 1e-4);
}

TEST(SupC, TooCoarseScanIsResolutionError) {
  SupSearchConfig cfg;
  cfg.points = 10;
  cfg.refine_top = 1;
  EXPECT_THROW(sup_C(cfg), NumericalError);
}

TEST(SupCTilde, AttainedAtThreeHalves) {
  const SupSearchResult r = sup_C_tilde();
  EXPECT_NEAR(r.sup_value, C_tilde(1.5), 1e-12);
  EXPECT_NEAR(r.arg, 1.5, 1e-5);
  EXPECT_LT(r.sup_value, tolerances::sup_below);
}

TEST(Hn, MatchesExactOracle) {
  for (int n : {3, 10, 57})
    for (int p : {1, 13, 25, 50}) {
      const cpp_rational x(p, 100);
      const double want = H_oracle(n, x);
      EXPECT_NEAR(H_n_exact(n, p / 100.0), want, 1e-12 * want) << n << " " << p;
    }
}

TEST(Hn, MonteCarloAgrees) {
  Rng rng(20240611);
  for (auto [n, x] : {std::pair{3, 0.5}, std::pair{20, 0.1}}) {
    const McEstimate mc = H_n_monte_carlo(n, x, 1000000, rng);
    EXPECT_LE(std::abs(mc.mean - H_n_exact(n, x)), tolerances::mc_sigmas * mc.std_error) << n;
  }
}

TEST(Hn, LargeNValueAndSup) {
  const double v = H_n_exact(2000, 0.25);
  EXPECT_GT(v, 0.75);
  EXPECT_LT(v, 1.0);
  EXPECT_LT(std::abs(v - std::sqrt(2.0 / std::numbers::pi)), 0.2);
  for (int n : {100, 500, 2000}) {
    const SupSearchResult r = sup_H_n(n);
    EXPECT_LE(r.sup_value, tolerances::H_n_sup_max) << n;
    EXPECT_NEAR(H_n_exact(n, r.arg), r.sup_value, 1e-15);
  }
}

TEST(Theorem4, Ingredients) {
  EXPECT_NEAR(D_of_lambda0(223600.0), 8650389228207554186.0, 1e3 * 1e3);
  EXPECT_LT(exponential_remainder(200), 1e-56);
  const CentralParams p = CentralParams::from_c(0.8);
  EXPECT_THROW(theorem4_bound(1000, p), PreconditionError);
  const int n0 = static_cast<int>(std::ceil(2.0 * p.lambda0));
  double prev = theorem4_bound(n0, p);
  EXPECT_GT(prev, 0.99);
  for (int n : {n0 * 2, n0 * 8, n0 * 64}) {
    const double b = theorem4_bound(n, p);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_NEAR(prev - 0.99, 2.0 * D_of_lambda0(p.lambda0) / (n0 * 64.0) * std::log(27.0 / 16.0), 1e-6 * (prev - 0.99));
}

TEST(Lemma6, DominatesHn) {
  EXPECT_GE(lemma6_bound(100, 0.3), H_n_exact(100, 0.3));
  EXPECT_GE(lemma6_bound(50, 0.01), H_n_exact(50, 0.01));
  for (int n : {10, 50, 100, 500})
    for (int i = 1; i <= 50; ++i) {
      const double x = 0.01 * i;
      EXPECT_GE(lemma6_bound(n, x), H_n_exact(n, x) * (1 - 1e-13)) << n << " " << x;
    }
}

TEST(Lemma8, BothBranches) {
  const CentralParams p = CentralParams::from_c(0.8);
  const int n = static_cast<int>(std::ceil(2.0 * p.lambda0)) + 1;
  EXPECT_TRUE(lemma8_check(n, 0.5, p));
  EXPECT_TRUE(lemma8_check(n, 10.0 / n, p));
  EXPECT_TRUE(lemma8_check(n, 3000.0 / n, p));
  EXPECT_THROW(lemma8_check(1000, 0.1, p), PreconditionError);
  for (int m : {1000, 5000})
    for (double l = 0.1; l < 10.0; l += 0.3) EXPECT_TRUE(lemma8_small_lambda_check(m, l / m, 10.0)) << m << " " << l;
  EXPECT_THROW(lemma8_small_lambda_check(1000, 0.02, 10.0), PreconditionError);
}

TEST(K, Examples) {
  EXPECT_NEAR(K_func(1.0), 23.838671589037318, 1e-12);
  EXPECT_NEAR(K_func(7.2), tolerances::K_7_2, tolerances::K_7_2_tol);
  EXPECT_NEAR(K_func(7.2), 2.8275116530574974, 1e-14);
  EXPECT_NEAR(K_func(1e12), std::sqrt(3.0), 1e-5);
  double prev = K_func(1.0);
  for (double s = 1.5; s <= 1e6; s *= 1.5) {
    const double k = K_func(s);
    EXPECT_LT(k, prev) << s;
    EXPECT_GT(k, std::sqrt(3.0));
    prev = k;
  }
  EXPECT_THROW(K_func(0.0), DomainError);
}

TEST(Lemma12, Examples) {
  for (int m : {2, 3})
    for (double x : {0.1, 0.5, 0.8}) {
      EXPECT_NEAR(lemma12_lhs(m, x, x), 1.0, 1e-10);
      EXPECT_NEAR(lemma12_rhs(m, x, x), 1.0, 0.0);
    }
  EXPECT_TRUE(lemma12_check(3, 0.5, 0.9));
  EXPECT_TRUE(lemma12_check(2, 0.1, 0.05));
  EXPECT_THROW(lemma12_check(4, 0.5, 0.5), PreconditionError);
  EXPECT_THROW(lemma12_lhs(2, 0.0, 0.5), DomainError);
}

TEST(Lemma12, QuadratureMatchesGaussKronrod) {
  for (int m : {2, 3})
    for (double x : {0.05, 0.3, 0.5, 0.95})
      for (double z : {0.0, 0.2, 0.6, 0.99}) {
        if (m == 2 && (z == 0.0)) continue;  // log-singular endpoint, covered by the inequality sweep
        const double px = std::sqrt(x * (1 - x));
        auto g = [&](double t) {
          const double w = x + (z - x) * t;
          return m * std::pow(1.0 - t, m - 1) * std::pow(px / std::sqrt(w * (1 - w)), m);
        };
        const double want = oracle::gk(g, {0.0, 0.5, 0.9, 0.99, 1.0});
        EXPECT_NEAR(lemma12_lhs(m, x, z), want, 1e-8 * want) << m << " " << x << " " << z;
      }
}

TEST(Lemma12, InequalityHoldsOnGrid) {
  for (int m : {2, 3})
    for (int i = 1; i < 20; ++i)
      for (int j = 0; j <= 20; ++j) EXPECT_TRUE(lemma12_check(m, i / 20.0, j / 20.0)) << m << " " << i << " " << j;
}

TEST(Lemma9, HoldsOnCorpus) {
  for (const auto& f : corpus::all())
    for (int n : {20, 50, 100}) {
      const ValidatorOutcome o = lemma9_check(f, n);
      EXPECT_EQ(o.status, ValidatorOutcome::Status::pass) << o.detail << " lhs=" << o.lhs << " rhs=" << o.rhs;
    }
}

TEST(Theorem14, HoldsOrIsVacuous) {
  for (const auto& f : {corpus::cube().fn, corpus::sine().fn})
    for (int n : {50, 100}) {
      const ValidatorOutcome o = theorem14_check(f, n, 7.2);
      EXPECT_TRUE(o.ok()) << o.detail;
      EXPECT_EQ(o.status, ValidatorOutcome::Status::pass) << o.detail;
    }
  EXPECT_THROW(theorem14_check(corpus::cube().fn, 4, 7.2), PreconditionError);
}

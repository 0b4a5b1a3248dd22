#include <gtest/gtest.h>

#include <cmath>

#include "bcv/bounds.hpp"
#include "bcv/corpus.hpp"
#include "bcv/tolerances.hpp"
#include "oracles.hpp"

using namespace bcv;

namespace {

// G from 50-digit Poisson probabilities of the integer values 1, -0.8, -1, 0.04, then 1.
double G_oracle(double lambda) {
  const double p0 = oracle::poisson_pmf(lambda, 0), p1 = oracle::poisson_pmf(lambda, 1);
  const double p2 = oracle::poisson_pmf(lambda, 2), p3 = oracle::poisson_pmf(lambda, 3);
  return p0 - 0.8 * p1 - p2 + 0.04 * p3 + (1.0 - (p0 + p1 + p2 + p3));
}

}  // namespace

TEST(UpperH1, Values) {
  const double v = upper_expr_H1(7.2);
  EXPECT_GE(v, tolerances::upper_H1_lo);
  EXPECT_LT(v, tolerances::upper_bound);
  EXPECT_NEAR(v, 74.77, 0.05);
  const double k = K_func(7.2);
  EXPECT_NEAR(v, 4.0 + (2.0 + std::sqrt(2.0)) / (1.0 - 0.99 * k / 3.0) * std::log(4.0), 1e-12);
  EXPECT_THROW(upper_expr_H1(1.0), DomainError);
  EXPECT_THROW(upper_expr_H1(6.19), DomainError);
  EXPECT_NO_THROW(upper_expr_H1(6.2));
}

TEST(UpperH1, DecreasingWhereDefined) {
  double prev = upper_expr_H1(6.2);
  for (double a = 6.3; a <= 100.0; a += 0.1) {
    const double v = upper_expr_H1(a);
    EXPECT_LT(v, prev) << a;
    prev = v;
  }
}

TEST(UpperH2, Values) {
  const double v = upper_expr_H2(7.2, 20, 13);
  EXPECT_LT(v, tolerances::upper_bound);
  EXPECT_GT(v, 70.0);
  double s = 13.0;
  for (int k = 13; k <= 20; ++k) s += J_limit(k, 7.2);
  EXPECT_NEAR(v, 4.0 + std::sqrt(2.0) * s / (1.0 - J_limit(21, 7.2)) * std::log(4.0), 1e-10);
  EXPECT_THROW(upper_expr_H2(7.2, 20, 12), PreconditionError);
  EXPECT_THROW(upper_expr_H2(7.2, 12, 13), PreconditionError);
}

TEST(UpperH2, DepthProbeIsContinuous) {
  // Reported only: neighbouring depths give nearby finite values.
  for (int m = 13; m <= 40; ++m) {
    const double v = upper_expr_H2(7.2, m, 13);
    EXPECT_TRUE(std::isfinite(v)) << m;
    EXPECT_GT(v, 4.0);
  }
}

TEST(FirstValidI, Examples) {
  EXPECT_EQ(first_valid_i(0.5), 1);
  EXPECT_EQ(first_valid_i(1.5), 2);
  EXPECT_EQ(first_valid_i(7.2), 13);
  for (double a : {1.0, 2.0, 5.0, 9.3}) {
    const int i = first_valid_i(a);
    EXPECT_LT(a * alpha_iter(i - 1, 1.0), 1.0);
    if (i > 1) {
      EXPECT_GE(a * alpha_iter(i - 2, 1.0), 1.0);
    }
  }
}

TEST(Theorem1, Report) {
  const UpperBoundReport r = theorem1_upper(7.2, 20);
  EXPECT_EQ(r.i, 13);
  EXPECT_TRUE(r.passes_74_8);
  EXPECT_LT(r.max, 74.8);
  EXPECT_GT(r.max, 70.0);
  EXPECT_EQ(r.max, std::max(r.expr_H1, r.expr_H2));
  const UpperBoundReport bad = theorem1_upper(3.0, 20);
  EXPECT_FALSE(bad.passes_74_8);
  EXPECT_GT(bad.max, 74.8);
  EXPECT_FALSE(bad.note.empty());
}

TEST(Theorem1, SweepMinimumNearSevenPointTwo) {
  const SweepResult s = sweep_upper(5.0, 10.0, 0.1, 20);
  EXPECT_EQ(s.rows.size(), 51u);
  EXPECT_LT(s.best_max, 74.8);
  EXPECT_NEAR(s.best_a, 7.2, 0.3);
  for (const auto& r : s.rows) {
    EXPECT_EQ(r.passes_74_8, r.max < 74.8);
    if (std::isfinite(r.max)) {
      EXPECT_GT(r.max, theorem2_constant());
    }
  }
}

TEST(Theorem2, Constant) {
  EXPECT_NEAR(theorem2_constant(), tolerances::theorem2_target, tolerances::theorem2);
  EXPECT_NEAR(theorem2_constant(), 15.047731866651418, 1e-12);
  EXPECT_NEAR(std::sqrt(2.0) * (std::sqrt(2.0) + 1.0), 2.0 + std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(2.0 + std::sqrt(2.0), 3.4142135, 1e-7);
}

TEST(Theorem2, LimitOfH1) {
  // K(s) - sqrt 3 ~ c / sqrt(s), so the gap to the limit halves when a quadruples.
  const double c = theorem2_constant();
  for (double a : {1e4, 1e6, 1e8}) {
    const double g1 = upper_expr_H1(a) - c, g4 = upper_expr_H1(4.0 * a) - c;
    EXPECT_GT(g1, 0.0);
    EXPECT_NEAR(g4 / g1, 0.5, 0.01) << a;
  }
  EXPECT_LT(upper_expr_H1(1e9) - c, 1e-3);
}

TEST(Witness, Values) {
  const int n = 100;
  const PiecewiseLinearFn f = build_fn_lower(n);
  EXPECT_EQ(f(0.0), 1.0);
  EXPECT_EQ(f(1.0), 1.0);
  EXPECT_NEAR(f(2.0 / n), -1.0, 1e-15);
  EXPECT_NEAR(f(1.0 / n), -0.8, 1e-15);
  EXPECT_NEAR(f(3.0 / n), 0.04, 1e-15);
  EXPECT_NEAR(f(1.5 / n), -0.9, 1e-14);
  EXPECT_NEAR(f((2.0 - std::sqrt(2.0)) / n), 1.0, 1e-15);
  const auto b = f.breakpoints();
  ASSERT_EQ(b.size(), 5u);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i - 1], b[i]);
  EXPECT_LE(b.back(), 1.0);
  EXPECT_NO_THROW(build_fn_lower(8));
  EXPECT_THROW(build_fn_lower(7), PreconditionError);
}

TEST(Witness, GAgainstPoissonOracle) {
  EXPECT_NEAR(G_of_lambda(0.0) - g_of_lambda(0.0), 0.0, 1e-15);
  EXPECT_LT(std::abs(G_of_lambda(40.0) - 1.0), 1e-10);
  for (double l : {0.1, 0.5, 1.0, 2.0, 3.3, 7.9, 8.1, 15.0, 39.0}) EXPECT_NEAR(G_of_lambda(l), G_oracle(l), 1e-14) << l;
  EXPECT_NEAR(g_of_lambda(1.5), -0.9, 1e-15);
  EXPECT_EQ(g_of_lambda(10.0), 1.0);
}

TEST(Witness, SupGMinusG) {
  const SupSearchResult r = sup_G_minus_g();
  // Attained at the corner lambda = 2 where g = -1.
  EXPECT_NEAR(r.arg, 2.0, 1e-6);
  EXPECT_NEAR(r.sup_value, std::abs(G_oracle(2.0) + 1.0), 1e-12);
  EXPECT_NEAR(r.sup_value, 0.7982227, 1e-7);
  EXPECT_TRUE(r.tail_certified);
}

TEST(LowerBound, RatioAtTenThousand) {
  const LowerBoundReport r = lower_bound_ratio(10000);
  EXPECT_GE(r.omega2phi, tolerances::omega_lo);
  EXPECT_LE(r.omega2phi, tolerances::omega_hi);
  EXPECT_LE(r.sup_err, tolerances::sup_err_max);
  EXPECT_GE(r.sup_err, 0.75);
  EXPECT_GE(r.ratio, tolerances::ratio_min);
  EXPECT_DOUBLE_EQ(r.ratio, r.omega2phi / r.sup_err);
  EXPECT_GT(r.err_grid_points, 16000);
}

TEST(LowerBound, RatioTrend) {
  double prev = 0.0;
  for (int n : {1000, 10000, 100000}) {
    const LowerBoundReport r = lower_bound_ratio(n);
    EXPECT_GE(r.ratio, prev - 0.05) << n;
    EXPECT_LT(r.ratio, 5.1);
    prev = r.ratio;
  }
}

TEST(Theorem3, Examples) {
  {
    const ValidatorOutcome o = theorem3_check(corpus::affine().fn, 50);
    EXPECT_NEAR(o.lhs, 0.0, 1e-13);
    EXPECT_TRUE(o.ok());
  }
  {
    const ValidatorOutcome o = theorem3_check(corpus::square().fn, 100);
    EXPECT_NEAR(o.lhs, 1.0 / 200.0, 1e-12);
    EXPECT_NEAR(o.rhs, 4.0 / 400.0 + std::log(4.0) / 100.0 * 0.5 * (1.0 - 1.0 / 100.0), 1e-12);
    EXPECT_EQ(o.status, ValidatorOutcome::Status::pass);
  }
  {
    const ValidatorOutcome o = theorem3_check(build_fn_lower(10000).to_real_fn(), 10000);
    EXPECT_EQ(o.status, ValidatorOutcome::Status::pass) << o.detail;
  }
}

TEST(Theorem3, HoldsOnCorpus) {
  for (const auto& f : corpus::all())
    for (int n : {10, 50, 200, 1000}) {
      const ValidatorOutcome o = theorem3_check(f, n, {1024, 256, 4});
      EXPECT_EQ(o.status, ValidatorOutcome::Status::pass) << o.detail;
    }
}

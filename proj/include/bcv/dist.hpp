#pragma once

// Discrete laws (binomial, Poisson), total variation, and the continuous
// helpers V = U1 + U2 and beta(1, m) used throughout the inverse-moment bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bcv/numeric.hpp"
#include "bcv/random.hpp"

namespace bcv {

namespace detail {

// Stirling-series error log(k!) - [(k + 1/2) log k - k + log sqrt(2 pi)].
inline double stirlerr(double k) {
  static const std::array<double, 16> small = [] {
    std::array<double, 16> t{};
    const double log_sqrt_2pi = 0.5 * std::log(constants::two_pi);
    double log_fact = 0.0;
    t[0] = 0.0;
    for (int i = 1; i < 16; ++i) {
      const double li = std::log(static_cast<double>(i));
      log_fact += li;
      t[i] = log_fact + i - log_sqrt_2pi - (0.5 + i) * li;
    }
    return t;
  }();
  constexpr double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0, s3 = 1.0 / 1680.0,
                   s4 = 1.0 / 1188.0;
  if (k < 16.0) return small[static_cast<std::size_t>(k)];
  const double k1 = 1.0 / k;
  const double k2 = k1 * k1;
  if (k > 500.0) return (s0 - s1 * k2) * k1;
  if (k > 80.0) return (s0 - (s1 - s2 * k2) * k2) * k1;
  if (k > 35.0) return (s0 - (s1 - (s2 - s3 * k2) * k2) * k2) * k1;
  return (s0 - (s1 - (s2 - (s3 - s4 * k2) * k2) * k2) * k2) * k1;
}

// Deviance term k log(k / np) + np - k, evaluated without cancellation near k = np.
inline double bd0(double k, double np) {
  if (std::abs(k - np) < 0.1 * (k + np)) {
    const double v = (k - np) / (k + np);
    double s = (k - np) * v;
    double ej = 2.0 * k * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v * v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return k * std::log(k / np) + np - k;
}

inline long truncation_radius(double variance) {
  return static_cast<long>(std::ceil(40.0 * std::sqrt(variance + 1.0))) + 40;
}

}  // namespace detail

/// Law of S_n(x): number of successes in n trials with success probability x.
class BinomialLaw {
 public:
  BinomialLaw(int n, double x) : n_(n), x_(x) {
    if (n < 0) throw DomainError("BinomialLaw: n must be nonnegative");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("BinomialLaw: x must lie in [0,1]");
  }

  int n() const { return n_; }
  double x() const { return x_; }
  double mean() const { return n_ * x_; }
  double variance() const { return n_ * x_ * (1.0 - x_); }

  double pmf(long k) const {
    if (k < 0 || k > n_) return 0.0;
    if (x_ == 0.0) return k == 0 ? 1.0 : 0.0;
    if (x_ == 1.0) return k == n_ ? 1.0 : 0.0;
    if (k == 0) return std::exp(n_ * std::log1p(-x_));
    if (k == n_) return std::exp(n_ * std::log(x_));
    const double kd = static_cast<double>(k);
    const double rest = static_cast<double>(n_ - k);
    const double lc = detail::stirlerr(n_) - detail::stirlerr(kd) - detail::stirlerr(rest) -
                      detail::bd0(kd, n_ * x_) - detail::bd0(rest, n_ * (1.0 - x_));
    return std::exp(lc) * std::sqrt(n_ / (constants::two_pi * kd * rest));
  }

  /// Smallest index whose mass is not negligible (tail below ~1e-300).
  long truncation_lo() const {
    return std::max<long>(0, static_cast<long>(std::floor(mean())) - detail::truncation_radius(variance()));
  }
  long truncation_hi() const {
    return std::min<long>(n_, static_cast<long>(std::ceil(mean())) + detail::truncation_radius(variance()));
  }

  double cdf(long k) const {
    if (k < 0) return 0.0;
    if (k >= n_) return 1.0;
    if (static_cast<double>(k) < mean()) {
      double s = 0.0;
      for (long j = std::min(k, truncation_lo()); j <= k; ++j) s += pmf(j);
      return s;
    }
    double upper = 0.0;
    for (long j = k + 1; j <= truncation_hi(); ++j) upper += pmf(j);
    return 1.0 - upper;
  }

 private:
  int n_;
  double x_;
};

/// Law of N_lambda.
class PoissonLaw {
 public:
  explicit PoissonLaw(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("PoissonLaw: lambda must be >= 0");
  }

  double lambda() const { return lambda_; }
  double mean() const { return lambda_; }
  double variance() const { return lambda_; }

  double pmf(long k) const {
    if (k < 0) return 0.0;
    if (lambda_ == 0.0) return k == 0 ? 1.0 : 0.0;
    if (k == 0) return std::exp(-lambda_);
    const double kd = static_cast<double>(k);
    return std::exp(-detail::stirlerr(kd) - detail::bd0(kd, lambda_)) / std::sqrt(constants::two_pi * kd);
  }

  long truncation_lo() const {
    return std::max<long>(0, static_cast<long>(std::floor(lambda_)) - detail::truncation_radius(lambda_));
  }
  /// k* = ceil(lambda) + ceil(40 sqrt(lambda + 1)) + 40.
  long truncation_hi() const {
    return static_cast<long>(std::ceil(lambda_)) + detail::truncation_radius(lambda_);
  }

  double cdf(long k) const {
    if (k < 0) return 0.0;
    if (static_cast<double>(k) < lambda_) {
      double s = 0.0;
      for (long j = std::min(k, truncation_lo()); j <= k; ++j) s += pmf(j);
      return s;
    }
    double upper = 0.0;
    for (long j = k + 1; j <= truncation_hi(); ++j) upper += pmf(j);
    return 1.0 - upper;
  }

 private:
  double lambda_;
};

/// V = U1 + U2 with U_k uniform on [0,1]: tent density on [0,2].
struct TriangularV {
  static double density(double v) {
    if (v < 0.0 || v > 2.0) return 0.0;
    return std::min(v, 2.0 - v);
  }
  static constexpr double mean() { return 1.0; }
  static constexpr double variance() { return 1.0 / 6.0; }
};

/// beta(1, m): density m (1 - t)^{m-1} on [0,1].
class BetaOneM {
 public:
  explicit BetaOneM(int m) : m_(m) {
    if (m < 1) throw DomainError("BetaOneM: m must be positive");
  }
  int m() const { return m_; }
  double density(double t) const {
    if (t < 0.0 || t > 1.0) return 0.0;
    return m_ * std::pow(1.0 - t, m_ - 1);
  }
  double mean() const { return 1.0 / (m_ + 1.0); }
  double second_moment() const { return 2.0 / ((m_ + 1.0) * (m_ + 2.0)); }
  double variance() const { return second_moment() - mean() * mean(); }

 private:
  int m_;
};

inline double law_pmf(const BinomialLaw& law, long k) {
  if (k < 0) throw DomainError("law_pmf: k must be nonnegative");
  return law.pmf(k);
}
inline double law_pmf(const PoissonLaw& law, long k) {
  if (k < 0) throw DomainError("law_pmf: k must be nonnegative");
  return law.pmf(k);
}

/// (1/2) sum_k |p(k) - q(k)| over the union of both truncation windows.
template <typename P, typename Q>
double tv_distance(const P& p, const Q& q) {
  const long hi = std::max(p.truncation_hi(), q.truncation_hi());
  double s = 0.0;
  for (long k = 0; k <= hi; ++k) s += std::abs(p.pmf(k) - q.pmf(k));
  return std::min(1.0, 0.5 * s);
}

/// Binomial-Poisson total variation bound, valid for n >= 10:
/// (lambda/n) (sqrt(2)/4 + (4/11)(3 lambda + 4) lambda^2 / n).
inline double tv_binom_poisson_bound(int n, double lambda) {
  if (n < 10) throw PreconditionError("tv_binom_poisson_bound: requires n >= 10");
  if (!(lambda >= 0.0)) throw DomainError("tv_binom_poisson_bound: lambda must be >= 0");
  return lambda / n * (constants::sqrt2 / 4.0 + 4.0 / 11.0 * (3.0 * lambda + 4.0) * lambda * lambda / n);
}

/// Whether P(S_n(m/n) = m) <= sqrt(n / (m (n - m))) / sqrt(2 pi).
inline bool stirling_mode_bound_check(int n, int m) {
  if (m < 1 || m > n - 1) throw PreconditionError("stirling_mode_bound_check: requires 1 <= m <= n-1");
  const double lhs = BinomialLaw(n, static_cast<double>(m) / n).pmf(m);
  const double rhs = std::sqrt(static_cast<double>(n) / (static_cast<double>(m) * (n - m)) / constants::two_pi);
  return lhs <= rhs;
}

/// E 1/(y + V) = (y+2)log(y+2) - 2(y+1)log(y+1) + y log y, with 0 log 0 = 0.
inline double inv_moment_shift_V(double y) {
  if (!(y >= 0.0)) throw DomainError("inv_moment_shift_V: y must be >= 0");
  if (y < 1.0) {
    // With u = y + 1 the log u parts cancel exactly.
    const double u = y + 1.0;
    const double minus = (y == 0.0) ? 0.0 : (u - 1.0) * std::log1p(-1.0 / u);
    return (u + 1.0) * std::log1p(1.0 / u) + minus;
  }
  // Even moments of V - 1: E (V-1)^{2j} = 1/((2j+1)(j+1)).
  const double u = y + 1.0;
  const double q = 1.0 / (u * u);
  double term = 1.0;
  double s = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double add = term / ((2.0 * j + 1.0) * (j + 1.0));
    s += add;
    if (add < 1e-18 * s) break;
    term *= q;
  }
  return s / u;
}

// Sampling. Every sampler consumes only uniforms from the supplied stream.

inline long sample(const BinomialLaw& law, Rng& rng) {
  const int n = law.n();
  const double x = law.x();
  if (x == 0.0 || n == 0) return 0;
  if (x == 1.0) return n;
  if (x > 0.5) return n - sample(BinomialLaw(n, 1.0 - x), rng);
  if (n * x > 200.0) {
    long k = 0;
    for (int i = 0; i < n; ++i) k += rng.uniform() < x ? 1 : 0;
    return k;
  }
  // Sequential inversion from k = 0; the mean is small on this branch.
  const double u = rng.uniform();
  const double ratio = x / (1.0 - x);
  const long cap = law.truncation_hi();
  double p = std::exp(n * std::log1p(-x));
  double cdf = p;
  long k = 0;
  while (u >= cdf && k < cap) {
    p *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
    cdf += p;
  }
  return k;
}

inline double sample(const TriangularV&, Rng& rng) { return rng.uniform() + rng.uniform(); }

inline double sample(const BetaOneM& law, Rng& rng) {
  // Inverse cdf of 1 - (1 - t)^m.
  return 1.0 - std::pow(1.0 - rng.uniform(), 1.0 / law.m());
}

}  // namespace bcv

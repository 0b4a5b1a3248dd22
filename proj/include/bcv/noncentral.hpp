#pragma once

// Non-central region: alpha iterates, b_n, the quadratures L_k, the limit
// constants J(k,a), the finite-n bound for J_n(m,a), and a seeded simulator
// of the subordinated process W_n^(m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "bcv/bernstein.hpp"
#include "bcv/dist.hpp"
#include "bcv/numeric.hpp"
#include "bcv/random.hpp"
#include "bcv/validation.hpp"

namespace bcv {

/// alpha_0(theta) = theta, alpha_{k+1} = 1 - exp(-alpha_k).
inline double alpha_iter(int m, double theta) {
  if (m < 0) throw DomainError("alpha_iter: m must be >= 0");
  double a = theta;
  for (int k = 0; k < m; ++k) a = -std::expm1(-a);
  return a;
}

struct AlphaIterates {
  int m = 0;
  std::vector<double> values;  // alpha_0(theta) ... alpha_m(theta)

  static AlphaIterates compute(int m, double theta) {
    if (m < 0) throw DomainError("AlphaIterates: m must be >= 0");
    AlphaIterates out;
    out.m = m;
    out.values.reserve(static_cast<std::size_t>(m) + 1);
    double a = theta;
    out.values.push_back(a);
    for (int k = 0; k < m; ++k) {
      a = -std::expm1(-a);
      out.values.push_back(a);
    }
    return out;
  }
};

/// Smallest i >= 1 with a * alpha_{i-1}(1) < 1.
inline int first_valid_i(double a) {
  if (!(a > 0.0)) throw DomainError("first_valid_i: a must be > 0");
  double alpha = 1.0;
  for (int i = 1; i < 100000; ++i) {
    if (a * alpha < 1.0) return i;
    alpha = -std::expm1(-alpha);
  }
  throw NumericalError("first_valid_i: no admissible index below 100000");
}

struct NoncentralParams {
  double a;
  int m;
  int i;

  NoncentralParams(double a_, int m_) : a(a_), m(m_), i(first_valid_i(a_)) {
    if (i > m) throw PreconditionError("NoncentralParams: first valid index exceeds m");
  }
};

/// b_n = 2a / (1 + sqrt(1 - 4a/n)); every x in the non-central region has nx < b_n.
inline double b_n(double a, int n) {
  if (!(a > 0.0)) throw DomainError("b_n: a must be > 0");
  if (!(n > 4.0 * a)) throw PreconditionError("b_n: requires n > 4a");
  return 2.0 * a / (1.0 + std::sqrt(1.0 - 4.0 * a / n));
}

/// epsilon_n = (4/n) log(27/16) + exp(-n/2).
inline double epsilon_n(int n) {
  if (n < 1) throw DomainError("epsilon_n: n must be >= 1");
  return 4.0 / n * constants::log27_16 + std::exp(-0.5 * n);
}

namespace detail {

inline double alpha_ratio(int k, double theta) {
  if (theta == 0.0) return 1.0;
  return alpha_iter(k, theta) / theta;
}

}  // namespace detail

/// L_k(a) = int_0^1 (alpha_{k-1}(theta)/theta)^2 exp(-a alpha_{k-1}(theta)) dtheta.
inline double L_k(int k, double a, const QuadConfig& quad = {}) {
  if (k < 1) throw DomainError("L_k: k must be >= 1");
  if (!(a >= 0.0)) throw DomainError("L_k: a must be >= 0");
  auto integrand = [k, a](double theta) {
    if (theta == 0.0) return 1.0;
    const double al = alpha_iter(k - 1, theta);
    const double r = al / theta;
    return r * r * std::exp(-a * al);
  };
  return integrate(integrand, 0.0, 1.0, quad);
}

/// J(k,a) = a (2 L_k(a) log(27/16) + (log 4 - 2 log(27/16)) alpha_{k-1}(1)^2 exp(-a alpha_{k-1}(1))).
inline double J_limit(int k, double a, const QuadConfig& quad = {}) {
  if (k < 1) throw DomainError("J_limit: k must be >= 1");
  const double al = alpha_iter(k - 1, 1.0);
  const double coef = constants::log4 - 2.0 * constants::log27_16;
  return a * (2.0 * L_k(k, a, quad) * constants::log27_16 + coef * al * al * std::exp(-a * al));
}

/// Finite-n upper bound for J_n(m,a); requires b_n <= 1/alpha_{m-1}(1).
inline double lemma18_bound(int n, int m, double a, const QuadConfig& quad = {}) {
  if (m < 1) throw DomainError("lemma18_bound: m must be >= 1");
  const double b = b_n(a, n);
  const double al = alpha_iter(m - 1, 1.0);
  if (!(b * al <= 1.0)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "lemma18_bound: hypothesis b_n <= 1/alpha_{m-1}(1) fails (b_n=" << b << ", 1/alpha=" << 1.0 / al << ")";
    throw PreconditionError(msg.str());
  }
  // b_n e^{2 b_n m/n} (...) is J(m, b_n) + b_n eps_n scaled by the exponential factor.
  return std::exp(2.0 * b * m / n) * (J_limit(m, b, quad) + b * epsilon_n(n));
}

/// Pointwise bound on phi^2(x) E 1/phi^2(W_n^(m)(x)) from the inverse-moment estimate at lambda = nx.
/// The exponential factor is the one accumulated by m induction steps.
inline double lemma17_pointwise_bound(int n, int m, double a, double x, const QuadConfig& quad = {}) {
  if (m < 1) throw DomainError("lemma17_pointwise_bound: m must be >= 1");
  const double b = b_n(a, n);
  const double lambda = n * x;
  const double al = alpha_iter(m - 1, 1.0);
  const double coef = constants::log4 - 2.0 * constants::log27_16;
  const double inner = 2.0 * constants::log27_16 * L_k(m, lambda, quad) + coef * al * al * std::exp(-lambda * al) +
                       epsilon_n(n);
  return n * phi_squared(x) * std::exp(2.0 * b * m / n) * inner;
}

/// Upper end of the non-central region {x <= 1/2 : n phi^2(x) < a}.
inline double noncentral_edge(int n, double a) {
  if (!(n > 4.0 * a)) throw PreconditionError("noncentral_edge: requires n > 4a");
  const double d = std::sqrt(1.0 - 4.0 * a / n);
  return 2.0 * a / n / (1.0 + d);  // (1 - d)/2 without cancellation
}

/// One draw of W_n^(m)(x): m-fold composition of theta -> (S_{n-2}(theta) + V)/n.
inline double sample_W(int n, int m, double x, Rng& rng) {
  double theta = x;
  for (int k = 0; k < m; ++k) {
    const double s = static_cast<double>(sample(BinomialLaw(n - 2, theta), rng));
    const double v = sample(TriangularV{}, rng);
    theta = (s + v) / n;
    if (!(theta > 0.0 && theta < 1.0)) throw NumericalError("sample_W: W left (0,1)");
  }
  return theta;
}

struct SimulatedPoint {
  double x = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimulateJResult {
  int n = 0;
  int m = 0;
  double a = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<SimulatedPoint> points;
  double estimate = 0.0;   // max over the grid
  double std_error = 0.0;  // at the maximizing point
  double arg_x = 0.0;
};

/// Monte Carlo estimate of J_n(m,a) over a 64-point grid of the non-central region.
/// Each grid point draws from its own stream, so results do not depend on the thread count.
inline SimulateJResult simulate_J(int n, int m, double a, long trials, const Rng& rng, int grid_points = 64) {
  if (trials < 10000) throw PreconditionError("simulate_J: trials must be >= 1e4");
  if (m < 1) throw DomainError("simulate_J: m must be >= 1");
  const double edge = noncentral_edge(n, a);
  SimulateJResult out;
  out.n = n;
  out.m = m;
  out.a = a;
  out.trials = trials;
  out.seed = rng.seed();
  out.points = parallel_map<SimulatedPoint>(static_cast<std::size_t>(grid_points), [&](std::size_t j) {
    const double x = (static_cast<double>(j) + 0.5) / grid_points * edge;
    Rng stream = rng.split(j);
    const double px2 = phi_squared(x);
    double sum = 0.0, sum_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
      const double w = sample_W(n, m, x, stream);
      const double v = px2 / phi_squared(w);
      sum += v;
      sum_sq += v * v;
    }
    SimulatedPoint p;
    p.x = x;
    p.mean = sum / trials;
    p.std_error = std::sqrt(std::max(0.0, sum_sq / trials - p.mean * p.mean) / trials);
    return p;
  });
  for (const auto& p : out.points) {
    if (p.mean > out.estimate) {
      out.estimate = p.mean;
      out.std_error = p.std_error;
      out.arg_x = p.x;
    }
  }
  return out;
}

/// Sample mean of W_n^(m)(x) with its standard error.
inline SimulatedPoint simulate_W_mean(int n, int m, double x, long trials, const Rng& rng) {
  Rng stream = rng.split(0);
  double sum = 0.0, sum_sq = 0.0;
  for (long t = 0; t < trials; ++t) {
    const double w = sample_W(n, m, x, stream);
    sum += w;
    sum_sq += w * w;
  }
  SimulatedPoint p;
  p.x = x;
  p.mean = sum / trials;
  p.std_error = std::sqrt(std::max(0.0, sum_sq / trials - p.mean * p.mean) / trials);
  return p;
}

/// ||phi^2 g''|| / n (1 - J_n(m+1,a)) <= sqrt2 (i + sum_{k=i}^m J_n(k,a)) ||B_n f - f||,
/// with J_n replaced by its finite-n bound; vacuous when the hypothesis fails or J_n(m+1,a) >= 1.
inline ValidatorOutcome theorem19_check(const RealFn& f, int n, double a, int m, int i) {
  std::ostringstream d;
  d.precision(6);
  d << "theorem 19 for " << f.label << " n=" << n << " a=" << a << " m=" << m << " i=" << i;
  if (i < 1 || i > m) throw PreconditionError("theorem19_check: requires 1 <= i <= m");
  const double b = b_n(a, n);
  const double inv_alpha = 1.0 / alpha_iter(i - 1, 1.0);
  ValidatorOutcome vac;
  vac.status = ValidatorOutcome::Status::vacuous;
  if (!(b <= inv_alpha)) {
    d << "; vacuous: b_n=" << b << " > 1/alpha_{i-1}(1)=" << inv_alpha;
    vac.detail = d.str();
    return vac;
  }
  double j_sum = 0.0;
  for (int k = i; k <= m; ++k) j_sum += lemma18_bound(n, k, a);
  const double j_next = lemma18_bound(n, m + 1, a);
  if (!(j_next < 1.0)) {
    d << "; vacuous: bound on J_n(m+1,a)=" << j_next << " >= 1";
    vac.detail = d.str();
    return vac;
  }
  const GridVector fg = GridVector::sample(f, n);
  const double edge = noncentral_edge(n, a);
  const auto all = norm_grid(n, 0.0, 0.5);
  std::vector<double> region;
  for (double x : all) {
    if (x < edge) region.push_back(x);
  }
  if (region.empty()) throw NumericalError("theorem19_check: empty non-central grid");
  auto weighted = [&](double x) { return phi_squared(x) * bernstein_derivative_krawtchouk(fg, 2, x); };
  const double g2_region = sup_abs_on(region, weighted);
  const double g2_all = sup_abs_on(all, weighted);
  const double err = sup_abs_on(all, [&](double x) { return bernstein_apply(fg, x) - f(x); });
  d << ": b_n=" << b << " J_n(m+1)<=" << j_next << " sum J<=" << j_sum << " H2 "
    << (g2_region >= g2_all * (1.0 - 1e-12) ? "holds" : "does not hold");
  return compare_le(g2_region / n * (1.0 - j_next), constants::sqrt2 * (i + j_sum) * err, d.str());
}

}  // namespace bcv

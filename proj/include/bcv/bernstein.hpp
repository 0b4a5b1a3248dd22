#pragma once

// Bernstein operator, its iterates, Krawtchouk polynomials, the two
// derivative representations and absolute central moments.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcv/dist.hpp"
#include "bcv/numeric.hpp"

namespace bcv {

/// A real function on [0,1]. Breakpoints, when present, mark the kinks of a
/// piecewise-linear function; modulus searches add them to their grids.
struct RealFn {
  std::function<double(double)> eval;
  std::string label;
  std::vector<double> breakpoints;

  double operator()(double y) const { return eval(y); }
};

/// RealFn together with analytic derivatives f', f'', f''' (index 1..3).
struct DifferentiableFn {
  RealFn fn;
  std::array<std::function<double(double)>, 3> derivatives;

  double derivative(int m, double y) const {
    if (m == 0) return fn(y);
    if (m < 1 || m > 3 || !derivatives[m - 1]) throw PreconditionError("derivative order not available");
    return derivatives[m - 1](y);
  }
};

/// Continuous piecewise-linear interpolant, constant beyond its end breakpoints.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(std::vector<double> breakpoints, std::vector<double> values, std::string label = "pwl")
      : xs_(std::move(breakpoints)), ys_(std::move(values)), label_(std::move(label)) {
    if (xs_.empty() || xs_.size() != ys_.size()) {
      throw PreconditionError("PiecewiseLinearFn: need equally many breakpoints and values");
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      if (!(xs_[i] > xs_[i - 1])) throw PreconditionError("PiecewiseLinearFn: breakpoints must increase");
    }
  }

  double operator()(double y) const {
    if (y <= xs_.front()) return ys_.front();
    if (y >= xs_.back()) return ys_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double x0 = xs_[i - 1], x1 = xs_[i];
    if (y == x0) return ys_[i - 1];
    const double t = (y - x0) / (x1 - x0);
    return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
  }

  std::span<const double> breakpoints() const { return xs_; }
  std::span<const double> values() const { return ys_; }
  const std::string& label() const { return label_; }

  RealFn to_real_fn() const {
    auto self = *this;
    return RealFn{[self](double y) { return self(y); }, label_, xs_};
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::string label_;
};

/// Values of a function at j/n, j = 0..n. B_n f depends on f only through these.
class GridVector {
 public:
  GridVector(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (n < 1) throw PreconditionError("GridVector: n must be >= 1");
    if (values_.size() != static_cast<std::size_t>(n) + 1) {
      throw PreconditionError("GridVector: expected n+1 values");
    }
  }

  static GridVector sample(const RealFn& f, int n) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) v[j] = f(static_cast<double>(j) / n);
    return GridVector(n, std::move(v));
  }

  int n() const { return n_; }
  std::span<const double> values() const { return values_; }
  double operator[](long j) const { return values_[static_cast<std::size_t>(j)]; }

 private:
  int n_;
  std::vector<double> values_;
};

inline double phi_squared(double x) { return x * (1.0 - x); }

/// phi(x) = sqrt(x (1 - x)).
inline double phi(double x) { return std::sqrt(std::max(0.0, phi_squared(x))); }

/// sum_k P(S_n(x) = k) c(k) over the binomial truncation window.
template <typename Coef>
double binomial_expectation(int n, double x, Coef&& c) {
  const BinomialLaw law(n, x);
  double s = 0.0;
  for (long k = law.truncation_lo(); k <= law.truncation_hi(); ++k) {
    const double p = law.pmf(k);
    if (p != 0.0) s += p * c(k);
  }
  return s;
}

inline double bernstein_apply(const GridVector& g, double x) {
  return binomial_expectation(g.n(), x, [&](long k) { return g[k]; });
}

/// B_n f(x) = sum_k f(k/n) C(n,k) x^k (1-x)^{n-k}.
inline double bernstein_apply(const RealFn& f, int n, double x) {
  if (n < 1) throw PreconditionError("bernstein_apply: n must be >= 1");
  return binomial_expectation(n, x, [&](long k) { return f(static_cast<double>(k) / n); });
}

/// Grid values of B_n h at i/n, i = 0..n.
inline GridVector bernstein_step(const GridVector& g) {
  const int n = g.n();
  auto next = parallel_map<double>(static_cast<std::size_t>(n) + 1, [&](std::size_t i) {
    return bernstein_apply(g, static_cast<double>(i) / n);
  });
  return GridVector(n, std::move(next));
}

/// B_n^k f(x), by k-1 exact grid iterations followed by one evaluation.
inline double bernstein_iterate(const RealFn& f, int n, int k, double x) {
  if (k < 1) throw PreconditionError("bernstein_iterate: k must be >= 1");
  GridVector g = GridVector::sample(f, n);
  for (int j = 1; j < k; ++j) g = bernstein_step(g);
  return bernstein_apply(g, x);
}

namespace detail {

// Generalized binomial coefficient C(a, j) for real a via the falling factorial.
inline long double general_binomial(long double a, int j) {
  long double r = 1.0L;
  for (int i = 0; i < j; ++i) r *= (a - i) / static_cast<long double>(i + 1);
  return r;
}

}  // namespace detail

/// Krawtchouk polynomial K_m(x; y) for the binomial(n, x) law:
/// sum_j C(n-y, m-j) C(y, j) (-x)^{m-j} (1-x)^j.
inline double krawtchouk(int n, int m, double x, double y) {
  if (m < 0 || m > n) throw PreconditionError("krawtchouk: requires 0 <= m <= n");
  if (m == 0) return 1.0;
  const long double xl = x;
  long double s = 0.0L;
  for (int j = 0; j <= m; ++j) {
    s += detail::general_binomial(static_cast<long double>(n) - y, m - j) * detail::general_binomial(y, j) *
         std::pow(-xl, m - j) * std::pow(1.0L - xl, j);
  }
  return static_cast<double>(s);
}

/// (E K_r(x;S_n) K_m(x;S_n), C(n,m) phi^{2m}(x) delta_{rm}).
inline std::pair<double, double> krawtchouk_orthogonality_check(int n, double x, int r, int m) {
  if (r < 0 || m < 0 || r > n || m > n) throw PreconditionError("krawtchouk_orthogonality_check: r,m <= n");
  const BinomialLaw law(n, x);
  long double s = 0.0L;
  for (long k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    s += static_cast<long double>(law.pmf(k)) * krawtchouk(n, r, x, kd) * krawtchouk(n, m, x, kd);
  }
  double expected = 0.0;
  if (r == m) {
    expected = static_cast<double>(detail::general_binomial(n, m)) * std::pow(phi_squared(x), m);
  }
  return {static_cast<double>(s), expected};
}

/// m-th forward difference of phi_fn with step h at y.
inline double forward_difference(const std::function<double(double)>& phi_fn, double h, int m, double y) {
  if (m < 0) throw PreconditionError("forward_difference: m must be >= 0");
  double s = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
    s += sign * binom * phi_fn(y + h * j);
    binom = binom * (m - j) / (j + 1);
  }
  return s;
}

inline double falling_factorial(int n, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= static_cast<double>(n - i);
  return r;
}

namespace detail {

inline void check_derivative_args(int n, int m, double x) {
  if (m < 1 || m > n) throw PreconditionError("bernstein derivative: requires 1 <= m <= n");
  if (!(x > 0.0 && x < 1.0)) throw DomainError("bernstein derivative: x must lie in (0,1)");
}

// value_at(k) returns f(k/n).
template <typename ValueAt>
double derivative_krawtchouk_form(int n, int m, double x, ValueAt&& value_at) {
  check_derivative_args(n, m, x);
  const double s = binomial_expectation(n, x, [&](long k) {
    return value_at(k) * krawtchouk(n, m, x, static_cast<double>(k));
  });
  double mfact = 1.0;
  for (int i = 2; i <= m; ++i) mfact *= i;
  return mfact * s / std::pow(phi_squared(x), m);
}

template <typename ValueAt>
double derivative_difference_form(int n, int m, double x, ValueAt&& value_at) {
  check_derivative_args(n, m, x);
  const double s = binomial_expectation(n - m, x, [&](long k) {
    double d = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= m; ++j) {
      const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
      d += sign * binom * value_at(k + j);
      binom = binom * (m - j) / (j + 1);
    }
    return d;
  });
  return falling_factorial(n, m) * s;
}

}  // namespace detail

/// (B_n f)^{(m)}(x) through the Krawtchouk representation (the default path).
inline double bernstein_derivative_krawtchouk(const RealFn& f, int n, int m, double x) {
  return detail::derivative_krawtchouk_form(n, m, x, [&](long k) { return f(static_cast<double>(k) / n); });
}
inline double bernstein_derivative_krawtchouk(const GridVector& g, int m, double x) {
  return detail::derivative_krawtchouk_form(g.n(), m, x, [&](long k) { return g[k]; });
}

/// (B_n f)^{(m)}(x) = (n)_m E Delta_{1/n}^m f(S_{n-m}(x)/n).
inline double bernstein_derivative_difference(const RealFn& f, int n, int m, double x) {
  return detail::derivative_difference_form(n, m, x, [&](long k) { return f(static_cast<double>(k) / n); });
}
inline double bernstein_derivative_difference(const GridVector& g, int m, double x) {
  return detail::derivative_difference_form(g.n(), m, x, [&](long k) { return g[k]; });
}

struct DerivativeResult {
  double value;             // Krawtchouk form
  double difference_form;   // cross-check
};

/// Rounding scale of either derivative sum: 16 eps (n)_m max_k |f(k/n)|.
/// Below it a relative comparison of two near-zero results is meaningless.
inline double derivative_noise_floor(const RealFn& f, int n, int m) {
  double fmax = 0.0;
  for (int k = 0; k <= n; ++k) fmax = std::max(fmax, std::abs(f(static_cast<double>(k) / n)));
  return 16.0 * std::numeric_limits<double>::epsilon() * falling_factorial(n, m) * fmax;
}

/// Both derivative representations; throws NumericalError if they disagree
/// by more than rel_tol relative to the larger magnitude and by more than the noise floor.
inline DerivativeResult bernstein_derivative(const RealFn& f, int n, int m, double x, double rel_tol = 1e-9) {
  const double a = bernstein_derivative_krawtchouk(f, n, m, x);
  const double b = bernstein_derivative_difference(f, n, m, x);
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  if (std::abs(a - b) > rel_tol * scale && std::abs(a - b) > derivative_noise_floor(f, n, m)) {
    throw NumericalError("bernstein_derivative: representations disagree for " + f.label + " (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
  return {a, b};
}

namespace detail {

// Irwin-Hall density of U_1 + ... + U_m, m <= 3.
inline double irwin_hall_density(int m, double u) {
  switch (m) {
    case 1:
      return (u >= 0.0 && u <= 1.0) ? 1.0 : 0.0;
    case 2:
      return TriangularV::density(u);
    case 3:
      if (u < 0.0 || u > 3.0) return 0.0;
      if (u < 1.0) return 0.5 * u * u;
      if (u < 2.0) return 0.5 * (-2.0 * u * u + 6.0 * u - 3.0);
      return 0.5 * (3.0 - u) * (3.0 - u);
    default:
      throw PreconditionError("Irwin-Hall density implemented for m <= 3");
  }
}

}  // namespace detail

/// (Krawtchouk-form derivative, ((n)_m/n^m) E f^{(m)}((S_{n-m} + U_1 + ... + U_m)/n)).
/// The second value integrates the Irwin-Hall density piecewise on [j, j+1].
inline std::pair<double, double> kantorovich_check(const DifferentiableFn& f, int n, int m, double x) {
  if (m < 1 || m > 3) throw PreconditionError("kantorovich_check: supported for m in {1,2,3}");
  const double lhs = bernstein_derivative_krawtchouk(f.fn, n, m, x);
  const QuadConfig qc{1e-13, 40};
  const double s = binomial_expectation(n - m, x, [&](long k) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      acc += integrate(
          [&](double u) {
            return f.derivative(m, (static_cast<double>(k) + u) / n) * detail::irwin_hall_density(m, u);
          },
          j, j + 1, qc);
    }
    return acc;
  });
  const double rhs = falling_factorial(n, m) / std::pow(static_cast<double>(n), m) * s;
  return {lhs, rhs};
}

/// E |S_n(x)/n - x|^k.
inline double central_moment(int n, double x, int k) {
  if (k < 1) throw PreconditionError("central_moment: k must be >= 1");
  return binomial_expectation(n, x, [&](long j) { return std::pow(std::abs(static_cast<double>(j) / n - x), k); });
}

/// mu_4 = 3 phi^4 / n^2 + phi^2 (1 - 6 phi^2) / n^3.
inline double central_moment4_closed(int n, double x) {
  const double p2 = phi_squared(x);
  const double nd = n;
  return 3.0 * p2 * p2 / (nd * nd) + p2 / (nd * nd * nd) * (1.0 - 6.0 * p2);
}

/// mu_6 = phi^2/n^5 (15 phi^4 n^2 + 5 phi^2 (5 - 26 phi^2) n + 1 - 30 phi^2 (1-2x)^2).
inline double central_moment6_closed(int n, double x) {
  const double p2 = phi_squared(x);
  const double nd = n;
  const double t = 1.0 - 2.0 * x;
  return p2 / std::pow(nd, 5) *
         (15.0 * p2 * p2 * nd * nd + 5.0 * p2 * (5.0 - 26.0 * p2) * nd + 1.0 - 30.0 * p2 * t * t);
}

inline double central_moment4_upper(int n, double x) {
  const double p2 = phi_squared(x);
  return p2 * p2 / (static_cast<double>(n) * n) * (3.0 + 1.0 / (n * p2));
}

inline double central_moment6_upper(int n, double x) {
  const double p2 = phi_squared(x);
  const double s = n * p2;
  return p2 * p2 * p2 / std::pow(static_cast<double>(n), 3) * (15.0 + 25.0 / s + 1.0 / (s * s));
}

}  // namespace bcv

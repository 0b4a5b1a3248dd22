#pragma once

// Headline constants: the two upper-bound expressions for the strong converse
// constant, the smooth-class limit, and the lower-bound witness f_n.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bcv/bernstein.hpp"
#include "bcv/central.hpp"
#include "bcv/dist.hpp"
#include "bcv/moduli.hpp"
#include "bcv/noncentral.hpp"
#include "bcv/numeric.hpp"
#include "bcv/validation.hpp"

namespace bcv {

/// 4 + sqrt2 (sqrt2 + 1) / (1 - 0.99 K(a)/3) log 4.
inline double upper_expr_H1(double a) {
  const double denom = 1.0 - 0.99 * K_func(a) / 3.0;
  if (!(denom > 0.0)) throw DomainError("upper_expr_H1: 1 - 0.99 K(a)/3 <= 0 (a too small)");
  return 4.0 + constants::sqrt2 * (constants::sqrt2 + 1.0) / denom * constants::log4;
}

/// 4 + sqrt2 (i + sum_{k=i}^m J(k,a)) / (1 - J(m+1,a)) log 4, with i the first valid index for a.
inline double upper_expr_H2(double a, int m, int i) {
  if (i > m) throw PreconditionError("upper_expr_H2: requires i <= m");
  if (i != first_valid_i(a)) {
    throw PreconditionError("upper_expr_H2: i must be the first index with a < 1/alpha_{i-1}(1)");
  }
  const double j_next = J_limit(m + 1, a);
  if (!(j_next < 1.0)) throw DomainError("upper_expr_H2: J(m+1,a) >= 1");
  double sum = i;
  for (int k = i; k <= m; ++k) sum += J_limit(k, a);
  return 4.0 + constants::sqrt2 * sum / (1.0 - j_next) * constants::log4;
}

/// lim_{a -> inf} of the first expression: K(a) -> sqrt3.
inline double theorem2_constant() {
  return 4.0 + (2.0 + constants::sqrt2) / (1.0 - 0.99 / std::sqrt(3.0)) * constants::log4;
}

struct UpperBoundReport {
  double a = 0.0;
  int m = 0;
  int i = 0;
  double expr_H1 = 0.0;  // +inf when the expression is vacuous
  double expr_H2 = 0.0;  // +inf when the expression is vacuous
  double max = 0.0;
  bool passes_74_8 = false;
  std::string note;
};

inline UpperBoundReport theorem1_upper(double a, int m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  UpperBoundReport r;
  r.a = a;
  r.m = m;
  r.i = first_valid_i(a);
  try {
    r.expr_H1 = upper_expr_H1(a);
  } catch (const DomainError& e) {
    r.expr_H1 = inf;
    r.note += e.what();
  }
  try {
    r.expr_H2 = upper_expr_H2(a, m, r.i);
  } catch (const std::logic_error& e) {
    r.expr_H2 = inf;
    if (!r.note.empty()) r.note += "; ";
    r.note += e.what();
  }
  r.max = std::max(r.expr_H1, r.expr_H2);
  r.passes_74_8 = r.max < 74.8;
  return r;
}

struct SweepResult {
  std::vector<UpperBoundReport> rows;     // coarse grid
  std::vector<UpperBoundReport> refined;  // fine grid around the coarse minimum
  double best_a = 0.0;
  double best_max = std::numeric_limits<double>::infinity();
};

/// Coarse scan of a in [lo, hi] with the given step, then a 0.01 scan around the minimum.
inline SweepResult sweep_upper(double lo, double hi, double step, int m, double fine_step = 0.01) {
  if (!(hi >= lo) || !(step > 0.0)) throw PreconditionError("sweep_upper: need lo <= hi and step > 0");
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  // Grid abscissae are snapped to 1e-10 so printed values of a stay short.
  auto snap = [](double a) { return std::round(a * 1e10) / 1e10; };
  SweepResult out;
  out.rows = parallel_map<UpperBoundReport>(static_cast<std::size_t>(count), [&](std::size_t k) {
    return theorem1_upper(snap(lo + step * static_cast<double>(k)), m);
  });
  const UpperBoundReport* best = &out.rows.front();
  for (const auto& r : out.rows) {
    if (r.max < best->max) best = &r;
  }
  out.best_a = best->a;
  out.best_max = best->max;
  if (!std::isfinite(best->max) || !(fine_step > 0.0)) return out;
  const double center = best->a;
  const long half = static_cast<long>(std::floor(step / fine_step + 1e-9));
  out.refined = parallel_map<UpperBoundReport>(static_cast<std::size_t>(2 * half + 1), [&](std::size_t k) {
    return theorem1_upper(snap(center + fine_step * (static_cast<double>(k) - half)), m);
  });
  for (const auto& r : out.refined) {
    if (r.max < out.best_max) {
      out.best_max = r.max;
      out.best_a = r.a;
    }
  }
  return out;
}

// Lower-bound witness.

namespace detail {

inline const std::vector<double>& witness_lambda_breaks() {
  static const std::vector<double> b{2.0 - constants::sqrt2, 1.0, 2.0, 3.0, 2.0 + constants::sqrt2};
  return b;
}
inline const std::vector<double>& witness_values() {
  static const std::vector<double> v{1.0, -0.8, -1.0, 0.04, 1.0};
  return v;
}

}  // namespace detail

/// f_n: piecewise linear through ((2-sqrt2)/n, 1), (1/n, -0.8), (2/n, -1), (3/n, 0.04), ((2+sqrt2)/n, 1),
/// constant 1 elsewhere.
inline PiecewiseLinearFn build_fn_lower(int n) {
  if (n < 8) throw PreconditionError("build_fn_lower: requires n >= 8");
  std::vector<double> xs;
  for (double l : detail::witness_lambda_breaks()) xs.push_back(l / n);
  return PiecewiseLinearFn(std::move(xs), detail::witness_values(), "f_" + std::to_string(n));
}

/// g(lambda) = f_n(lambda/n), independent of n in lambda coordinates.
inline double g_of_lambda(double lambda) {
  static const PiecewiseLinearFn g(detail::witness_lambda_breaks(), detail::witness_values(), "g");
  return g(lambda);
}

/// G(lambda) = E g(N_lambda), using the integer values 1, -0.8, -1, 0.04 and 1 for k >= 4.
inline double G_of_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("G_of_lambda: lambda must be >= 0");
  const PoissonLaw law(lambda);
  const double p0 = law.pmf(0), p1 = law.pmf(1), p2 = law.pmf(2), p3 = law.pmf(3);
  // 1 - P(N <= 3) written as a sum over the upper tail when it is small.
  double tail;
  if (lambda < 8.0) {
    tail = 0.0;
    for (long k = 4; k <= law.truncation_hi(); ++k) tail += law.pmf(k);
  } else {
    tail = 1.0 - (p0 + p1 + p2 + p3);
  }
  return p0 - 0.8 * p1 - p2 + 0.04 * p3 + tail;
}

/// sup over [0, lambda_max] of |G - g|: uniform lambda-grid plus breakpoints, golden refinement.
inline SupSearchResult sup_G_minus_g(double lambda_max = 40.0, long points = 16000, int refine_top = 8) {
  std::vector<double> grid = linspace(0.0, lambda_max, static_cast<std::size_t>(points) + 1);
  for (double b : detail::witness_lambda_breaks()) {
    if (b <= lambda_max) grid.push_back(b);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  auto diff = [](double l) { return std::abs(G_of_lambda(l) - g_of_lambda(l)); };
  const auto vals = parallel_map<double>(grid.size(), [&](std::size_t i) { return diff(grid[i]); });
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(order.size(), static_cast<std::size_t>(refine_top));
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b] || (vals[a] == vals[b] && a < b); });
  SupSearchResult out;
  out.scan_lo = 0.0;
  out.scan_hi = lambda_max;
  out.grid_points = static_cast<long>(grid.size());
  out.sup_value = vals[order[0]];
  out.arg = grid[order[0]];
  out.coarse_value = out.sup_value;
  const auto& breaks = detail::witness_lambda_breaks();
  for (std::size_t t = 0; t < top; ++t) {
    const std::size_t i = order[t];
    // Refine on each side separately: |G - g| is smooth between breakpoints only.
    for (int side : {-1, 1}) {
      const std::size_t j = side < 0 ? (i > 0 ? i - 1 : i) : (i + 1 < grid.size() ? i + 1 : i);
      if (j == i) continue;
      double lo = std::min(grid[i], grid[j]);
      double hi = std::max(grid[i], grid[j]);
      for (double b : breaks) {
        if (b > lo && b < hi) (side < 0 ? lo : hi) = b;
      }
      const ArgMax best = golden_section_max(diff, lo, hi, 1e-14);
      if (best.value > out.sup_value) {
        out.sup_value = best.value;
        out.arg = best.arg;
      }
    }
  }
  const double tail = 2.0 * PoissonLaw(lambda_max).cdf(3);
  out.tail_certified = tail < 1e-10;
  std::ostringstream cert;
  cert.precision(3);
  cert << "for lambda > " << lambda_max << ": g = 1 and |G - 1| <= 2 P(N_lambda <= 3) <= " << std::scientific << tail;
  out.tail_certificate = cert.str();
  return out;
}

struct LowerBoundReport {
  int n = 0;
  double omega2phi = 0.0;
  double omega_arg_x = 0.0;
  double omega_arg_h = 0.0;
  double sup_err = 0.0;
  double sup_err_arg = 0.0;
  double ratio = 0.0;
  double sup_G_minus_g = 0.0;
  long err_grid_points = 0;
};

namespace detail {

// x-grid for the f_n error: lambda-grid on [0, 40] mapped to x = lambda/n,
// a uniform grid on [0,1] and the breakpoints.
inline std::vector<double> witness_error_grid(int n, long lambda_points = 16000, int uniform_points = 1024) {
  std::vector<double> xs;
  for (double l : linspace(0.0, 40.0, static_cast<std::size_t>(lambda_points) + 1)) xs.push_back(std::min(1.0, l / n));
  for (double x : linspace(0.0, 1.0, static_cast<std::size_t>(uniform_points) + 1)) xs.push_back(x);
  for (double l : witness_lambda_breaks()) xs.push_back(l / n);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace detail

/// omega_2^phi(f_n; 1/sqrt n) / ||B_n f_n - f_n|| with the error taken over [0,1].
inline LowerBoundReport lower_bound_ratio(int n, const GridConfig& cfg = {}) {
  const PiecewiseLinearFn fpl = build_fn_lower(n);
  const RealFn f = fpl.to_real_fn();
  LowerBoundReport r;
  r.n = n;
  const ModulusResult om = omega2_phi(f, 1.0 / std::sqrt(static_cast<double>(n)), cfg);
  r.omega2phi = om.value;
  r.omega_arg_x = om.arg_x;
  r.omega_arg_h = om.arg_h;
  const GridVector fg = GridVector::sample(f, n);
  const auto xs = detail::witness_error_grid(n);
  r.err_grid_points = static_cast<long>(xs.size());
  const auto errs = parallel_map<double>(xs.size(), [&](std::size_t i) {
    return std::abs(bernstein_apply(fg, xs[i]) - f(xs[i]));
  });
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (errs[i] > r.sup_err) {
      r.sup_err = errs[i];
      r.sup_err_arg = xs[i];
    }
  }
  if (!(r.sup_err > 0.0)) throw NumericalError("lower_bound_ratio: zero approximation error");
  r.ratio = r.omega2phi / r.sup_err;
  r.sup_G_minus_g = sup_G_minus_g().sup_value;
  return r;
}

/// omega_2^phi(f; 1/sqrt n) <= 4 ||B_n f - f|| + (log 4 / n) ||phi^2 (B_n f)''||, norms over (0,1).
inline ValidatorOutcome theorem3_check(const RealFn& f, int n, const GridConfig& cfg = {}) {
  const double omega = omega2_phi(f, 1.0 / std::sqrt(static_cast<double>(n)), cfg).value;
  std::vector<double> xs = norm_grid(n, 0.0, 1.0);
  const std::size_t base = xs.size();
  for (std::size_t i = 0; i < base; ++i) {
    if (xs[i] < 0.5) xs.push_back(1.0 - xs[i]);
  }
  for (double b : f.breakpoints) {
    if (b > 0.0 && b < 1.0) xs.push_back(b);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  while (!xs.empty() && xs.back() >= 1.0) xs.pop_back();
  const GridVector fg = GridVector::sample(f, n);
  const double err = sup_abs_on(xs, [&](double x) { return bernstein_apply(fg, x) - f(x); });
  const double g2 = sup_abs_on(xs, [&](double x) { return phi_squared(x) * bernstein_derivative_krawtchouk(fg, 2, x); });
  std::ostringstream d;
  d.precision(6);
  d << "theorem 3 for " << f.label << " n=" << n << ": omega=" << omega << " err=" << err << " ||phi^2 g''||=" << g2;
  return compare_le(omega, 4.0 * err + constants::log4 / n * g2, d.str());
}

}  // namespace bcv

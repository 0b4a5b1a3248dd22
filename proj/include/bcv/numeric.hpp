#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bcv {

// Error taxonomy shared by every module.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace constants {
inline constexpr double log4 = 1.3862943611198906188;        // log 4 = E 1/V
inline constexpr double log27_16 = 0.52324814376454787986;   // log(27/16) = E 1/(1+V)
inline constexpr double sqrt2 = std::numbers::sqrt2;
inline constexpr double sqrt_2_over_pi = 0.79788456080286535588;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

/// Result of an adaptive quadrature.
struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

/// Tolerance controls for adaptive Simpson integration.
struct QuadConfig {
  double abs_tol = 1e-10;
  int max_depth = 40;
};

namespace detail {

struct SimpsonFrame {
  const std::function<double(double)>* f;
  int max_depth;
  bool converged = true;
  double err = 0.0;
};

inline double simpson_recurse(SimpsonFrame& frame, double a, double b, double fa, double fm, double fb,
                              double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*frame.f)(lm);
  const double frm = (*frame.f)(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    frame.err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (depth >= frame.max_depth) {
    frame.converged = false;
    frame.err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(frame, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(frame, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction on [a, b].
/// The interval is pre-split into 8 panels so that narrow features near the
/// endpoints are not missed by the first Simpson estimate.
inline QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                   const QuadConfig& cfg = {}) {
  QuadResult out;
  if (a == b) return out;
  constexpr int panels = 8;
  detail::SimpsonFrame frame{&f, cfg.max_depth};
  const double width = (b - a) / panels;
  double lo = a;
  double flo = f(lo);
  for (int p = 0; p < panels; ++p) {
    const double hi = (p + 1 == panels) ? b : a + width * (p + 1);
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    const double fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    out.value += detail::simpson_recurse(frame, lo, hi, flo, fmid, fhi, whole, cfg.abs_tol / panels, 0);
    lo = hi;
    flo = fhi;
  }
  out.error_estimate = frame.err;
  out.converged = frame.converged;
  return out;
}

/// Same as adaptive_simpson but throws NumericalError when the depth limit is hit.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadConfig& cfg = {}) {
  const QuadResult r = adaptive_simpson(f, a, b, cfg);
  if (!r.converged) {
    throw NumericalError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
  }
  return r.value;
}

struct ArgMax {
  double arg = 0.0;
  double value = -INFINITY;
};

/// Golden-section search for a maximum of a unimodal f on [lo, hi].
/// The endpoints are evaluated too, and the best point seen is returned.
inline ArgMax golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-12, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ArgMax best;
  auto consider = [&](double x, double fx) {
    if (fx > best.value) best = {x, fx};
  };
  consider(lo, f(lo));
  consider(hi, f(hi));
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

/// Worker count: hardware concurrency capped by the BCV_THREADS environment variable.
inline unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BCV_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

/// Evaluates fn(i) for i in [0, count) on contiguous chunks across threads.
/// Output order is the index order, so results do not depend on the thread count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

/// Uniform grid of `points` values covering [lo, hi] inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  out.back() = hi;
  return out;
}

}  // namespace bcv

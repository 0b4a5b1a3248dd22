#pragma once

// Moduli of continuity / smoothness by grid search with local refinement.
//
// Every search is parametrized as (x, t) in [0,1]^2 with h = t * hmax(x),
// where hmax(x) is the largest admissible step not exceeding delta. The
// coarse grid is augmented with breakpoint-aligned points, then the best
// cells are refined by alternating golden-section sweeps in x and t.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bcv/bernstein.hpp"
#include "bcv/numeric.hpp"

namespace bcv {

struct GridConfig {
  int x_points = 2048;
  int h_points = 512;
  int refine_top = 8;
};

struct ModulusResult {
  double value = 0.0;
  double arg_x = 0.0;
  double arg_h = 0.0;
  long grid_points = 0;
  bool refined = false;
};

namespace detail {

struct ModulusProblem {
  std::function<double(double)> hmax;               // admissible step bound at x, already capped by delta
  std::function<double(double, double)> difference;  // |difference| at (x, h)
};

struct Candidate {
  double x;
  double t;
  double value;
};

inline double eval_candidate(const ModulusProblem& p, double x, double t) {
  const double hm = p.hmax(x);
  if (!(hm > 0.0)) return 0.0;
  return p.difference(x, std::clamp(t, 0.0, 1.0) * hm);
}

inline ModulusResult run_modulus_search(const ModulusProblem& p, const GridConfig& cfg,
                                        std::vector<std::pair<double, double>> extra_xh,
                                        std::vector<double> x_features) {
  const int nx = std::max(2, cfg.x_points);
  const int nt = std::max(2, cfg.h_points);
  const std::vector<double> xs = linspace(0.0, 1.0, static_cast<std::size_t>(nx));
  const std::vector<double> ts = linspace(0.0, 1.0, static_cast<std::size_t>(nt));

  // Coarse scan: best t per x-strip, reduced deterministically.
  auto strips = parallel_map<Candidate>(xs.size(), [&](std::size_t i) {
    Candidate best{xs[i], 0.0, 0.0};
    const double hm = p.hmax(xs[i]);
    if (!(hm > 0.0)) return best;
    for (double t : ts) {
      const double v = p.difference(xs[i], t * hm);
      if (v > best.value) best = {xs[i], t, v};
    }
    return best;
  });

  std::vector<Candidate> cands = strips;
  for (const auto& [x, h] : extra_xh) {
    if (x < 0.0 || x > 1.0) continue;
    const double hm = p.hmax(x);
    if (!(hm > 0.0) || h > hm * (1.0 + 1e-12)) continue;
    const double t = std::min(1.0, h / hm);
    cands.push_back({x, t, eval_candidate(p, x, t)});
  }

  ModulusResult out;
  out.grid_points = static_cast<long>(xs.size() * ts.size() + extra_xh.size());
  for (const auto& c : cands) {
    if (c.value > out.value) {
      out.value = c.value;
      out.arg_x = c.x;
      out.arg_h = c.t * p.hmax(c.x);
    }
  }
  if (cfg.refine_top <= 0 || out.value == 0.0) return out;

  // Refinement windows in x are bounded by neighbouring grid points and features.
  x_features.insert(x_features.end(), xs.begin(), xs.end());
  std::sort(x_features.begin(), x_features.end());
  x_features.erase(std::unique(x_features.begin(), x_features.end()), x_features.end());

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.x != b.x) return a.x < b.x;
    return a.t < b.t;
  });
  std::vector<Candidate> top;
  for (const auto& c : cands) {
    if (static_cast<int>(top.size()) >= cfg.refine_top) break;
    const bool dup = std::any_of(top.begin(), top.end(), [&](const Candidate& o) { return o.x == c.x && o.t == c.t; });
    if (!dup) top.push_back(c);
  }

  const double dt = 1.0 / (nt - 1);
  auto refined = parallel_map<Candidate>(top.size(), [&](std::size_t idx) {
    Candidate c = top[idx];
    auto it = std::lower_bound(x_features.begin(), x_features.end(), c.x);
    const double x_lo = (it == x_features.begin()) ? 0.0 : *std::prev(it);
    auto jt = std::upper_bound(x_features.begin(), x_features.end(), c.x);
    const double x_hi = (jt == x_features.end()) ? 1.0 : *jt;
    const double t_lo = std::max(0.0, c.t - dt);
    const double t_hi = std::min(1.0, c.t + dt);
    for (int round = 0; round < 4; ++round) {
      const double tt = c.t;
      const ArgMax bx = golden_section_max([&](double x) { return eval_candidate(p, x, tt); }, x_lo, x_hi, 1e-15);
      if (bx.value > c.value) c = {bx.arg, tt, bx.value};
      const double xx = c.x;
      const ArgMax bt = golden_section_max([&](double t) { return eval_candidate(p, xx, t); }, t_lo, t_hi, 1e-15);
      if (bt.value > c.value) c = {xx, bt.arg, bt.value};
    }
    return c;
  });
  out.refined = true;
  for (const auto& c : refined) {
    if (c.value > out.value) {
      out.value = c.value;
      out.arg_x = c.x;
      out.arg_h = c.t * p.hmax(c.x);
    }
  }
  return out;
}

// Solves x + sign * h * phi(x) = target on the admissible range of x for step h.
// Returns a negative value when the target is not reachable.
inline double solve_weighted_shift(double h, double sign, double target) {
  const double lo = h * h / (1.0 + h * h);
  const double hi = 1.0 / (1.0 + h * h);
  if (lo > hi) return -1.0;
  auto g = [&](double x) { return x + sign * h * phi(x) - target; };
  double a = lo, b = hi;
  double ga = g(a), gb = g(b);
  if (ga > 0.0 || gb < 0.0) return -1.0;
  for (int it = 0; it < 200 && b - a > 1e-17; ++it) {
    const double m = 0.5 * (a + b);
    if (g(m) <= 0.0) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// omega_1(f; delta) = sup { |f(x+h) - f(x)| : 0 <= h <= delta, x, x+h in [0,1] }.
inline ModulusResult omega1(const RealFn& f, double delta, const GridConfig& cfg = {}) {
  if (!(delta >= 0.0)) throw DomainError("omega1: delta must be >= 0");
  if (delta == 0.0) return {};
  detail::ModulusProblem p{
      [delta](double x) { return std::min(delta, 1.0 - x); },
      [&f](double x, double h) { return std::abs(f(std::min(1.0, x + h)) - f(x)); }};
  std::vector<std::pair<double, double>> extra;
  for (double b : f.breakpoints) {
    for (double h : linspace(0.0, delta, static_cast<std::size_t>(std::max(2, cfg.h_points)))) {
      extra.emplace_back(b, h);
      extra.emplace_back(b - h, h);
    }
  }
  return detail::run_modulus_search(p, cfg, std::move(extra), f.breakpoints);
}

/// omega_2(f; delta) = sup { |f(x+h) - 2 f(x) + f(x-h)| : 0 <= h <= delta, x +- h in [0,1] }.
inline ModulusResult omega2(const RealFn& f, double delta, const GridConfig& cfg = {}) {
  if (!(delta >= 0.0)) throw DomainError("omega2: delta must be >= 0");
  if (delta == 0.0) return {};
  detail::ModulusProblem p{
      [delta](double x) { return std::min({delta, x, 1.0 - x}); },
      [&f](double x, double h) {
        return std::abs(f(std::min(1.0, x + h)) - 2.0 * f(x) + f(std::max(0.0, x - h)));
      }};
  std::vector<std::pair<double, double>> extra;
  for (double b : f.breakpoints) {
    for (double h : linspace(0.0, delta, static_cast<std::size_t>(std::max(2, cfg.h_points)))) {
      extra.emplace_back(b, h);
      extra.emplace_back(b - h, h);
      extra.emplace_back(b + h, h);
    }
  }
  return detail::run_modulus_search(p, cfg, std::move(extra), f.breakpoints);
}

/// Ditzian-Totik modulus: sup { |Delta^2_{h phi(x)} f(x)| : 0 <= h <= delta, x +- h phi(x) in [0,1] }.
/// The constraint is closed: x - h phi(x) = 0 is admissible.
inline ModulusResult omega2_phi(const RealFn& f, double delta, const GridConfig& cfg = {}) {
  if (!(delta >= 0.0)) throw DomainError("omega2_phi: delta must be >= 0");
  if (delta == 0.0) return {};
  detail::ModulusProblem p{
      [delta](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return std::min({delta, std::sqrt(x / (1.0 - x)), std::sqrt((1.0 - x) / x)});
      },
      [&f](double x, double h) {
        const double s = h * phi(x);
        return std::abs(f(std::min(1.0, x + s)) - 2.0 * f(x) + f(std::max(0.0, x - s)));
      }};
  std::vector<std::pair<double, double>> extra;
  for (double b : f.breakpoints) {
    for (double h : linspace(0.0, delta, static_cast<std::size_t>(std::max(2, cfg.h_points)))) {
      extra.emplace_back(b, h);
      for (double sign : {-1.0, 1.0}) {
        const double x = detail::solve_weighted_shift(h, sign, b);
        if (x >= 0.0) extra.emplace_back(x, h);
      }
    }
  }
  return detail::run_modulus_search(p, cfg, std::move(extra), f.breakpoints);
}

}  // namespace bcv

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bcv/numeric.hpp"

namespace bcv {

/// Outcome of checking one inequality numerically.
struct ValidatorOutcome {
  enum class Status { pass, fail, vacuous };
  Status status = Status::pass;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;

  bool ok() const { return status != Status::fail; }
};

inline const char* to_string(ValidatorOutcome::Status s) {
  switch (s) {
    case ValidatorOutcome::Status::pass:
      return "pass";
    case ValidatorOutcome::Status::fail:
      return "fail";
    case ValidatorOutcome::Status::vacuous:
      return "vacuous at this n";
  }
  return "?";
}

inline ValidatorOutcome compare_le(double lhs, double rhs, std::string detail = {}) {
  ValidatorOutcome out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.status = (lhs <= rhs) ? ValidatorOutcome::Status::pass : ValidatorOutcome::Status::fail;
  out.detail = std::move(detail);
  return out;
}

/// x-grid for sup-norms at scale n: uniform points on (lo, hi] plus x = lambda/n
/// for lambda on a 0.05 grid in (0, 40], which resolves the Poisson regime.
inline std::vector<double> norm_grid(int n, double lo, double hi, int uniform_points = 1024) {
  std::vector<double> xs;
  for (int i = 1; i <= uniform_points; ++i) xs.push_back(lo + (hi - lo) * i / uniform_points);
  for (int j = 1; j <= 800; ++j) {
    const double x = 0.05 * j / n;
    if (x > lo && x <= hi) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (!xs.empty() && xs.back() >= 1.0) xs.pop_back();
  return xs;
}

template <typename Fn>
double sup_abs_on(const std::vector<double>& xs, Fn&& fn) {
  const auto vals = parallel_map<double>(xs.size(), [&](std::size_t i) { return std::abs(fn(xs[i])); });
  double best = 0.0;
  for (double v : vals) best = std::max(best, v);
  return best;
}

}  // namespace bcv

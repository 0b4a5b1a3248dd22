#pragma once

// Test functions used by the validators: smooth ones carry derivatives up
// to order three, the kinked one carries its breakpoint.

#include <cmath>
#include <numbers>
#include <vector>

#include "bcv/bernstein.hpp"

namespace bcv::corpus {

inline DifferentiableFn affine() {
  return {{[](double y) { return 1.0 - 2.0 * y; }, "1-2y", {}},
          {[](double) { return -2.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }}};
}

inline DifferentiableFn square() {
  return {{[](double y) { return y * y; }, "y^2", {}},
          {[](double y) { return 2.0 * y; }, [](double) { return 2.0; }, [](double) { return 0.0; }}};
}

inline DifferentiableFn cube() {
  return {{[](double y) { return y * y * y; }, "y^3", {}},
          {[](double y) { return 3.0 * y * y; }, [](double y) { return 6.0 * y; }, [](double) { return 6.0; }}};
}

inline DifferentiableFn sine() {
  constexpr double pi = std::numbers::pi;
  return {{[](double y) { return std::sin(pi * y); }, "sin(pi y)", {}},
          {[](double y) { return pi * std::cos(pi * y); }, [](double y) { return -pi * pi * std::sin(pi * y); },
           [](double y) { return -pi * pi * pi * std::cos(pi * y); }}};
}

inline DifferentiableFn exponential() {
  return {{[](double y) { return std::exp(-y); }, "exp(-y)", {}},
          {[](double y) { return -std::exp(-y); }, [](double y) { return std::exp(-y); },
           [](double y) { return -std::exp(-y); }}};
}

inline RealFn kink() { return {[](double y) { return std::abs(y - 0.5); }, "|y-1/2|", {0.5}}; }

inline std::vector<DifferentiableFn> smooth() { return {affine(), square(), cube(), sine(), exponential()}; }

/// Every function as a plain RealFn.
inline std::vector<RealFn> all() {
  std::vector<RealFn> out;
  for (const auto& f : smooth()) out.push_back(f.fn);
  out.push_back(kink());
  return out;
}

}  // namespace bcv::corpus

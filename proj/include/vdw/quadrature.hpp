#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vdw/errors.hpp"

namespace vdw {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  unsigned max_depth = 20;
  // Accept the result when the error estimate is within this multiple of the
  // requested tolerance; beyond it the integral is reported as unconverged.
  double accept_factor = 100.0;
};

/// Adaptive 7/15-point Gauss-Kronrod on a finite interval [a, b].
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  std::size_t calls = 0;
  auto counted = [&](double x) {
    ++calls;
    return f(x);
  };
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      counted, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
  if (!std::isfinite(value)) {
    throw NumericalError("adaptive quadrature produced a non-finite value");
  }
  if (error > opts.accept_factor * opts.rel_tol * l1 && error > 1e-300) {
    throw NumericalError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]: error estimate " + std::to_string(error) +
                         " vs |f| integral " + std::to_string(l1));
  }
  return {value, error, calls};
}

}  // namespace vdw

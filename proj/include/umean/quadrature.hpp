#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>

#include "umean/errors.hpp"

namespace umean {

// Double-exponential quadrature wrappers. tanh-sinh tolerates integrable
// endpoint singularities, which is what the inverse-CDF substitutions below
// produce; exp-sinh covers (0, inf) with decaying integrands.

inline double integrate_finite(const std::function<double(double)>& f, double a, double b,
                               double abs_tol = 1e-9) {
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  double error = 0.0, l1 = 0.0;
  double result = integrator.integrate(f, a, b, 1e-12, &error, &l1);
  if (!std::isfinite(result) || error > abs_tol * std::max(1.0, std::abs(result)) + abs_tol)
    throw NumericalError("integrate_finite: failed to converge");
  return result;
}

inline double integrate_halfline(const std::function<double(double)>& f, double abs_tol = 1e-9) {
  boost::math::quadrature::exp_sinh<double> integrator(15);
  double error = 0.0, l1 = 0.0;
  double result = integrator.integrate(f, 1e-12, &error, &l1);
  if (!std::isfinite(result) || error > abs_tol * std::max(1.0, std::abs(result)) + abs_tol)
    throw NumericalError("integrate_halfline: failed to converge");
  return result;
}

}  // namespace umean

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "umean/errors.hpp"
#include "umean/interval.hpp"

namespace umean {

enum class Direction { increasing, decreasing };

/// A continuous, strictly monotone bijection u: J -> u(J), carried as a value
/// together with its inverse, derivative and domain/image metadata.
struct Transform {
  std::string name;
  std::vector<double> params;
  Interval domain;  // J
  Interval image;   // u(J)
  Direction direction = Direction::increasing;
  std::function<double(double)> fwd;
  std::function<double(double)> inv;
  std::function<double(double)> deriv;  // empty when no closed form (cdf transforms)

  double forward(double x) const {
    if (!domain.contains(x))
      throw ValidationError(name + ": argument " + std::to_string(x) + " outside domain");
    return fwd(x);
  }

  double inverse(double y) const {
    if (!image.contains(y))
      throw ValidationError(name + ": value " + std::to_string(y) + " outside image");
    return inv(y);
  }

  double derivative(double x) const {
    if (!domain.contains(x))
      throw ValidationError(name + ": argument " + std::to_string(x) + " outside domain");
    if (!deriv) throw ValidationError(name + ": derivative unavailable");
    return deriv(x);
  }

  /// (A, B) = (inf u(J), sup u(J)).
  std::pair<double, double> image_bounds() const { return {image.lo, image.hi}; }
};

/// Bisection inverse on a monotone forward map; fallback for transforms
/// without a closed-form inverse. Resolves to ~1e-12 relative in x.
inline double bisect_inverse(const std::function<double(double)>& f, const Interval& domain,
                             Direction dir, double y) {
  double lo = domain.lo, hi = domain.hi;
  // Establish a finite bracket when the domain is unbounded.
  if (std::isinf(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (((dir == Direction::increasing) ? f(lo) > y : f(lo) < y)) lo = 2.0 * lo - (std::isfinite(hi) ? hi : 0.0) - 1.0;
  } else if (domain.lo_open) {
    lo = std::nextafter(lo, hi);
  }
  if (std::isinf(hi)) {
    hi = std::isfinite(domain.lo) ? domain.lo + 1.0 : 1.0;
    while (((dir == Direction::increasing) ? f(hi) < y : f(hi) > y)) hi = 2.0 * hi - (std::isfinite(domain.lo) ? domain.lo : 0.0) + 1.0;
  } else if (domain.hi_open) {
    hi = std::nextafter(hi, lo);
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    bool go_right = (dir == Direction::increasing) ? fm < y : fm > y;
    (go_right ? lo : hi) = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline void require_param(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace detail

/// u_b(x) = (1+x)^(-b), [0, inf) -> (0, 1], decreasing.
inline Transform reciprocal_power_transform(double b) {
  detail::require_param(b > 0, "reciprocal_power: b must be > 0");
  Transform t;
  t.name = "reciprocal_power";
  t.params = {b};
  t.domain = Interval::left_closed(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::right_closed(0.0, 1.0);
  t.direction = Direction::decreasing;
  t.fwd = [b](double x) { return std::pow(1.0 + x, -b); };
  t.inv = [b](double y) { return std::pow(y, -1.0 / b) - 1.0; };
  t.deriv = [b](double x) { return -b * std::pow(1.0 + x, -b - 1.0); };
  return t;
}

/// u(t) = exp(-c t), [0, inf) -> (0, 1], decreasing.
inline Transform exp_rate_transform(double c) {
  detail::require_param(c > 0, "exp_rate: c must be > 0");
  Transform t;
  t.name = "exp_rate";
  t.params = {c};
  t.domain = Interval::left_closed(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::right_closed(0.0, 1.0);
  t.direction = Direction::decreasing;
  t.fwd = [c](double x) { return std::exp(-c * x); };
  t.inv = [c](double y) { return -std::log(y) / c; };
  t.deriv = [c](double x) { return -c * std::exp(-c * x); };
  return t;
}

/// u(t) = exp(-b/(2t)), (0, inf) -> (0, 1), increasing.
inline Transform exp_inverse_transform(double b) {
  detail::require_param(b > 0, "exp_inverse: b must be > 0");
  Transform t;
  t.name = "exp_inverse";
  t.params = {b};
  t.domain = Interval::open(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::open(0.0, 1.0);
  t.direction = Direction::increasing;
  t.fwd = [b](double x) { return std::exp(-b / (2.0 * x)); };
  t.inv = [b](double y) { return -b / (2.0 * std::log(y)); };
  t.deriv = [b](double x) { return (b / (2.0 * x * x)) * std::exp(-b / (2.0 * x)); };
  return t;
}

/// u(x) = ln x, (0, inf) -> R, increasing.
inline Transform log_transform() {
  Transform t;
  t.name = "log";
  t.domain = Interval::open(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::real_line();
  t.direction = Direction::increasing;
  t.fwd = [](double x) { return std::log(x); };
  t.inv = [](double y) { return std::exp(y); };
  t.deriv = [](double x) { return 1.0 / x; };
  return t;
}

/// u(x) = x^b, (0, inf) -> (0, inf), increasing (b > 0).
inline Transform power_transform(double b) {
  detail::require_param(b > 0, "power: b must be > 0");
  Transform t;
  t.name = "power";
  t.params = {b};
  t.domain = Interval::open(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::open(0.0, std::numeric_limits<double>::infinity());
  t.direction = Direction::increasing;
  t.fwd = [b](double x) { return std::pow(x, b); };
  t.inv = [b](double y) { return std::pow(y, 1.0 / b); };
  t.deriv = [b](double x) { return b * std::pow(x, b - 1.0); };
  return t;
}

/// u(x) = 1/x, (0, inf) -> (0, inf), decreasing.
inline Transform reciprocal_transform() {
  Transform t;
  t.name = "reciprocal";
  t.domain = Interval::open(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::open(0.0, std::numeric_limits<double>::infinity());
  t.direction = Direction::decreasing;
  t.fwd = [](double x) { return 1.0 / x; };
  t.inv = [](double y) { return 1.0 / y; };
  t.deriv = [](double x) { return -1.0 / (x * x); };
  return t;
}

/// u(x) = arctan(x)/pi, R -> (-1/2, 1/2), increasing.
inline Transform bounded_arctan_transform() {
  Transform t;
  t.name = "bounded_arctan";
  t.domain = Interval::real_line();
  t.image = Interval::open(-0.5, 0.5);
  t.direction = Direction::increasing;
  t.fwd = [](double x) { return std::atan(x) / M_PI; };
  t.inv = [](double y) { return std::tan(M_PI * y); };
  t.deriv = [](double x) { return 1.0 / (M_PI * (1.0 + x * x)); };
  return t;
}

/// u(x) = x/(1+|x|), R -> (-1, 1), increasing.
inline Transform bounded_ratio_transform() {
  Transform t;
  t.name = "bounded_ratio";
  t.domain = Interval::real_line();
  t.image = Interval::open(-1.0, 1.0);
  t.direction = Direction::increasing;
  t.fwd = [](double x) { return x / (1.0 + std::abs(x)); };
  t.inv = [](double y) { return y / (1.0 - std::abs(y)); };
  t.deriv = [](double x) { double d = 1.0 + std::abs(x); return 1.0 / (d * d); };
  return t;
}

/// u_b(x) = (1 + x^2/nu)^(-b), [0, inf) -> (0, 1], decreasing.
inline Transform student_kernel_transform(double b, double nu) {
  detail::require_param(b > 0, "student_kernel: b must be > 0");
  detail::require_param(nu > 0, "student_kernel: nu must be > 0");
  Transform t;
  t.name = "student_kernel";
  t.params = {b, nu};
  t.domain = Interval::left_closed(0.0, std::numeric_limits<double>::infinity());
  t.image = Interval::right_closed(0.0, 1.0);
  t.direction = Direction::decreasing;
  t.fwd = [b, nu](double x) { return std::pow(1.0 + x * x / nu, -b); };
  t.inv = [b, nu](double y) { return std::sqrt(nu * (std::pow(y, -1.0 / b) - 1.0)); };
  t.deriv = [b, nu](double x) { return -b * (2.0 * x / nu) * std::pow(1.0 + x * x / nu, -b - 1.0); };
  return t;
}

/// u(x) = F(x) for a continuous strictly increasing CDF on `domain`.
/// The inverse is bisection-based; the derivative is the density when given,
/// otherwise a central finite difference.
inline Transform cdf_transform(std::function<double(double)> cdf, Interval domain,
                               std::function<double(double)> density = nullptr) {
  Transform t;
  t.name = "cdf";
  t.domain = domain;
  t.image = Interval::open(0.0, 1.0);
  t.direction = Direction::increasing;
  t.fwd = std::move(cdf);
  auto f = t.fwd;
  t.inv = [f, domain](double y) { return bisect_inverse(f, domain, Direction::increasing, y); };
  if (density) {
    t.deriv = std::move(density);
  } else {
    t.deriv = [f](double x) {
      double h = 1e-6 * std::max(1.0, std::abs(x));
      return (f(x + h) - f(x - h)) / (2.0 * h);
    };
  }
  return t;
}

/// Right-continuous empirical CDF step transform, value k/n; the inverse is
/// the usual left-continuous sample quantile. Not a bijection, so the
/// round-trip invariants of smooth catalog entries do not apply.
inline Transform empirical_cdf_transform(std::vector<double> sample) {
  if (sample.empty()) throw ValidationError("empirical_cdf: empty sample");
  std::sort(sample.begin(), sample.end());
  Transform t;
  t.name = "empirical_cdf";
  t.domain = Interval::real_line();
  t.image = Interval::right_closed(0.0, 1.0);
  t.direction = Direction::increasing;
  auto sorted = std::make_shared<std::vector<double>>(std::move(sample));
  t.fwd = [sorted](double x) {
    auto it = std::upper_bound(sorted->begin(), sorted->end(), x);
    return static_cast<double>(it - sorted->begin()) / static_cast<double>(sorted->size());
  };
  t.inv = [sorted](double y) {
    std::size_t n = sorted->size();
    std::size_t k = static_cast<std::size_t>(std::ceil(y * static_cast<double>(n)));
    if (k == 0) k = 1;
    if (k > n) k = n;
    return (*sorted)[k - 1];
  };
  return t;
}

/// Catalog constructor. `name` picks the entry, `params` fills its
/// parameters in declaration order.
inline Transform make_transform(const std::string& name, const std::vector<double>& params = {}) {
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw ValidationError("make_transform: " + name + " expects " + std::to_string(k) +
                            " parameter(s), got " + std::to_string(params.size()));
  };
  if (name == "reciprocal_power") { need(1); return reciprocal_power_transform(params[0]); }
  if (name == "exp_rate") { need(1); return exp_rate_transform(params[0]); }
  if (name == "exp_inverse") { need(1); return exp_inverse_transform(params[0]); }
  if (name == "log") { need(0); return log_transform(); }
  if (name == "power") { need(1); return power_transform(params[0]); }
  if (name == "reciprocal") { need(0); return reciprocal_transform(); }
  if (name == "bounded_arctan") { need(0); return bounded_arctan_transform(); }
  if (name == "bounded_ratio") { need(0); return bounded_ratio_transform(); }
  if (name == "student_kernel") { need(2); return student_kernel_transform(params[0], params[1]); }
  throw ValidationError("make_transform: unknown transform '" + name + "'");
}

/// A one-parameter family b -> u_b, the unit of calibration.
struct TransformFamily {
  std::string name;
  Interval param_range;
  std::function<Transform(double)> instantiate;

  Transform at(double b) const {
    if (!param_range.contains(b))
      throw ValidationError(name + " family: parameter " + std::to_string(b) + " out of range");
    return instantiate(b);
  }
};

/// Family catalog. For student_kernel, `fixed` carries nu.
inline TransformFamily make_family(const std::string& name, const std::vector<double>& fixed = {}) {
  const double inf = std::numeric_limits<double>::infinity();
  TransformFamily f;
  f.name = name;
  f.param_range = Interval::open(0.0, inf);
  if (name == "reciprocal_power") {
    f.instantiate = [](double b) { return reciprocal_power_transform(b); };
  } else if (name == "exp_rate") {
    f.instantiate = [](double c) { return exp_rate_transform(c); };
  } else if (name == "exp_inverse") {
    f.instantiate = [](double b) { return exp_inverse_transform(b); };
  } else if (name == "power") {
    f.instantiate = [](double b) { return power_transform(b); };
  } else if (name == "student_kernel") {
    if (fixed.size() != 1) throw ValidationError("student_kernel family: needs fixed nu");
    double nu = fixed[0];
    f.instantiate = [nu](double b) { return student_kernel_transform(b, nu); };
  } else {
    throw ValidationError("make_family: unknown family '" + name + "'");
  }
  return f;
}

}  // namespace umean

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "umean/errors.hpp"
#include "umean/normal.hpp"
#include "umean/transform.hpp"

namespace umean {

using SampleVector = std::vector<double>;

namespace detail {

inline void check_sample(const Transform& t, const SampleVector& x) {
  if (x.empty()) throw ValidationError("empty sample");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      throw ValidationError("sample value at row " + std::to_string(i + 1) + " is not finite");
    if (!t.domain.contains(x[i]))
      throw ValidationError("sample value " + std::to_string(x[i]) + " at row " +
                            std::to_string(i + 1) + " outside domain of " + t.name);
  }
}

}  // namespace detail

/// Empirical d_u distance: root-mean-square of u-differences over paired
/// samples.
inline double u_distance(const Transform& t, const SampleVector& x, const SampleVector& y) {
  if (x.size() != y.size()) throw ValidationError("u_distance: length mismatch");
  detail::check_sample(t, x);
  detail::check_sample(t, y);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = t.fwd(x[i]) - t.fwd(y[i]);
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(x.size()));
}

/// Sample u-mean with its transformed-coordinate mean and dispersion.
struct UMeanEstimate {
  const Transform* transform = nullptr;
  std::size_t n = 0;
  double transformed_mean = 0.0;       // mean of u(x_k)
  double u_mean = 0.0;                 // inverse(transformed_mean)
  double transformed_sd_unbiased = 0;  // sqrt of the n-1 normalized variance
  double transformed_var_biased = 0;   // 1/n normalized variance
  bool has_dispersion = false;         // false when n == 1
};

/// The generalized-mean estimator: inverse of the mean of the transformed
/// sample. This is the point in J closest to the sample in the d_u metric.
inline UMeanEstimate u_mean(const Transform& t, const SampleVector& x) {
  detail::check_sample(t, x);
  const std::size_t n = x.size();
  std::vector<double> u(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = t.fwd(x[i]);
    sum += u[i];
  }
  UMeanEstimate est;
  est.transform = &t;
  est.n = n;
  est.transformed_mean = sum / static_cast<double>(n);
  est.u_mean = t.inverse(est.transformed_mean);
  double ss = 0.0;
  for (double ui : u) {
    double d = ui - est.transformed_mean;
    ss += d * d;
  }
  est.transformed_var_biased = ss / static_cast<double>(n);
  if (n >= 2) {
    est.transformed_sd_unbiased = std::sqrt(ss / static_cast<double>(n - 1));
    est.has_dispersion = true;
  }
  return est;
}

/// Sample prediction error: the unbiased estimator of Var(u(X)).
inline double prediction_error(const Transform& t, const SampleVector& x) {
  if (x.size() < 2) throw ValidationError("prediction_error: need n >= 2");
  auto est = u_mean(t, x);
  return est.transformed_sd_unbiased * est.transformed_sd_unbiased;
}

/// Per-group u-mean over a finite partition given by observation labels.
inline std::map<std::string, UMeanEstimate> conditional_u_mean(const Transform& t,
                                                               const SampleVector& y,
                                                               const std::vector<std::string>& groups) {
  if (y.size() != groups.size()) throw ValidationError("conditional_u_mean: label count mismatch");
  if (y.empty()) throw ValidationError("empty sample");
  std::map<std::string, SampleVector> parts;
  for (std::size_t i = 0; i < y.size(); ++i) parts[groups[i]].push_back(y[i]);
  std::map<std::string, UMeanEstimate> out;
  for (auto& [label, values] : parts) out[label] = u_mean(t, values);
  return out;
}

enum class Frame { transformed, original };

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;  // coverage probability
  Frame frame = Frame::transformed;
  bool clamped_low = false;
  bool clamped_high = false;
};

/// CLT interval for E[u(X)] in transformed coordinates: center at the
/// transformed mean, half-width z_{(1+level)/2} * sd / sqrt(n), endpoints
/// clamped to the image bounds [A, B].
inline ConfidenceInterval ci_transformed(const UMeanEstimate& est, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("ci_transformed: level must be in (0,1)");
  if (!est.has_dispersion) throw ValidationError("ci_transformed: need n >= 2");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double hw = z * est.transformed_sd_unbiased / std::sqrt(static_cast<double>(est.n));
  auto [A, B] = est.transform->image_bounds();
  ConfidenceInterval ci;
  ci.level = level;
  ci.frame = Frame::transformed;
  ci.lower = est.transformed_mean - hw;
  ci.upper = est.transformed_mean + hw;
  if (ci.lower < A) { ci.lower = A; ci.clamped_low = true; }
  if (ci.upper > B) { ci.upper = B; ci.clamped_high = true; }
  return ci;
}

/// Back-maps a transformed-frame interval through the inverse transform.
/// Endpoint order swaps when the transform is decreasing; an endpoint sitting
/// on a non-attained image bound maps to the corresponding J endpoint
/// (possibly infinite).
inline ConfidenceInterval ci_original(const Transform& t, const ConfidenceInterval& ci) {
  if (ci.frame != Frame::transformed) throw ValidationError("ci_original: interval not in transformed frame");
  auto [A, B] = t.image_bounds();
  if (!(ci.lower >= A && ci.upper <= B)) throw ValidationError("ci_original: endpoint outside image closure");

  auto back = [&](double y) -> double {
    const bool inc = t.direction == Direction::increasing;
    if (y == A && !t.image.contains(A)) return inc ? t.domain.lo : t.domain.hi;
    if (y == B && !t.image.contains(B)) return inc ? t.domain.hi : t.domain.lo;
    return t.inverse(y);
  };

  double a = back(ci.lower);
  double b = back(ci.upper);
  ConfidenceInterval out;
  out.level = ci.level;
  out.frame = Frame::original;
  if (t.direction == Direction::increasing) {
    out.lower = a; out.upper = b;
    out.clamped_low = ci.clamped_low; out.clamped_high = ci.clamped_high;
  } else {
    out.lower = b; out.upper = a;
    out.clamped_low = ci.clamped_high; out.clamped_high = ci.clamped_low;
  }
  return out;
}

}  // namespace umean

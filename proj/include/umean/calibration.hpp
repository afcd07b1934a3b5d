#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "umean/distributions.hpp"
#include "umean/errors.hpp"
#include "umean/estimation.hpp"
#include "umean/transform.hpp"

namespace umean {

enum class ScanSource { analytic, sample, replicated };

/// One row per grid parameter: predictor, prediction error and (in sample
/// modes) the back-mapped confidence interval. Replicated scans also carry
/// replication standard errors of the averaged columns.
struct ScanResult {
  std::vector<double> parameter_grid;
  std::vector<double> u_means;
  std::vector<double> variances;
  std::vector<double> ci_lowers;
  std::vector<double> ci_uppers;
  std::vector<double> transformed_means;
  std::vector<double> u_mean_se;    // replicated mode only
  std::vector<double> variance_se;  // replicated mode only
  std::vector<double> transformed_mean_se;
  ScanSource source = ScanSource::analytic;
  std::size_t replications = 0;

  void write_csv(std::ostream& os) const {
    os << "b,u_mean,variance,ci_lo,ci_hi\n";
    os.precision(17);
    for (std::size_t i = 0; i < parameter_grid.size(); ++i)
      os << parameter_grid[i] << ',' << u_means[i] << ',' << variances[i] << ','
         << ci_lowers[i] << ',' << ci_uppers[i] << '\n';
  }
};

/// Analytic scan: closed-form predictor and Var(u_b(X)) over the grid.
inline ScanResult scan_parameter(const TransformFamily& family, const DistributionModel& model,
                                 const std::vector<double>& grid) {
  ScanResult r;
  r.source = ScanSource::analytic;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double b : grid) {
    if (!family.param_range.contains(b))
      throw ValidationError("scan_parameter: grid point " + std::to_string(b) + " out of range");
    UMoment m = analytic_u_moment(model, family.name, b);
    r.parameter_grid.push_back(b);
    r.u_means.push_back(m.predictor);
    r.variances.push_back(m.variance);
    r.transformed_means.push_back(m.mean);
    r.ci_lowers.push_back(nan);
    r.ci_uppers.push_back(nan);
  }
  return r;
}

/// Sample scan: empirical u-mean, unbiased variance, and the original-frame
/// confidence interval at `level` for each grid parameter.
inline ScanResult scan_parameter(const TransformFamily& family, const SampleVector& sample,
                                 const std::vector<double>& grid, double level) {
  if (sample.empty()) throw ValidationError("scan_parameter: empty sample");
  ScanResult r;
  r.source = ScanSource::sample;
  for (double b : grid) {
    if (!family.param_range.contains(b))
      throw ValidationError("scan_parameter: grid point " + std::to_string(b) + " out of range");
    Transform t = family.instantiate(b);
    UMeanEstimate est = u_mean(t, sample);
    ConfidenceInterval ci = ci_original(t, ci_transformed(est, level));
    r.parameter_grid.push_back(b);
    r.u_means.push_back(est.u_mean);
    r.variances.push_back(est.transformed_sd_unbiased * est.transformed_sd_unbiased);
    r.transformed_means.push_back(est.transformed_mean);
    r.ci_lowers.push_back(ci.lower);
    r.ci_uppers.push_back(ci.upper);
  }
  return r;
}

/// Replicated scan: curves averaged over `reps` independent samples of size
/// `n`, with per-point replication standard errors. Replication r draws its
/// sample under derive_seed(seed, r), so results do not depend on evaluation
/// order.
inline ScanResult scan_parameter_replicated(const TransformFamily& family,
                                            const DistributionModel& model,
                                            const std::vector<double>& grid, std::size_t n,
                                            std::size_t reps, double level, std::uint64_t seed) {
  if (n < 2) throw ValidationError("scan_parameter_replicated: need n >= 2");
  if (reps < 2) throw ValidationError("scan_parameter_replicated: need reps >= 2");
  const std::size_t g = grid.size();
  std::vector<Transform> ts;
  ts.reserve(g);
  for (double b : grid) {
    if (!family.param_range.contains(b))
      throw ValidationError("scan_parameter_replicated: grid point " + std::to_string(b) +
                            " out of range");
    ts.push_back(family.instantiate(b));
  }

  std::vector<double> sum_m(g, 0), sumsq_m(g, 0), sum_v(g, 0), sumsq_v(g, 0);
  std::vector<double> sum_t(g, 0), sumsq_t(g, 0), sum_lo(g, 0), sum_hi(g, 0);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    SampleVector x = sample(model, n, derive_seed(seed, rep));
    for (std::size_t i = 0; i < g; ++i) {
      UMeanEstimate est = u_mean(ts[i], x);
      ConfidenceInterval ci = ci_original(ts[i], ci_transformed(est, level));
      double v = est.transformed_sd_unbiased * est.transformed_sd_unbiased;
      sum_m[i] += est.u_mean;
      sumsq_m[i] += est.u_mean * est.u_mean;
      sum_v[i] += v;
      sumsq_v[i] += v * v;
      sum_t[i] += est.transformed_mean;
      sumsq_t[i] += est.transformed_mean * est.transformed_mean;
      sum_lo[i] += ci.lower;
      sum_hi[i] += ci.upper;
    }
  }

  ScanResult r;
  r.source = ScanSource::replicated;
  r.replications = reps;
  const double R = static_cast<double>(reps);
  auto se = [R](double s, double ss) {
    double var = std::max(0.0, (ss - s * s / R) / (R - 1.0));
    return std::sqrt(var / R);
  };
  for (std::size_t i = 0; i < g; ++i) {
    r.parameter_grid.push_back(grid[i]);
    r.u_means.push_back(sum_m[i] / R);
    r.u_mean_se.push_back(se(sum_m[i], sumsq_m[i]));
    r.variances.push_back(sum_v[i] / R);
    r.variance_se.push_back(se(sum_v[i], sumsq_v[i]));
    r.transformed_means.push_back(sum_t[i] / R);
    r.transformed_mean_se.push_back(se(sum_t[i], sumsq_t[i]));
    r.ci_lowers.push_back(sum_lo[i] / R);
    r.ci_uppers.push_back(sum_hi[i] / R);
  }
  return r;
}

enum class ExtremumKind { interior_critical_point, boundary };

struct ExtremumReport {
  double parameter_star = 0.0;
  double value_star = 0.0;
  ExtremumKind kind = ExtremumKind::boundary;
  Interval bracket;
  int iterations = 0;
};

namespace detail {

/// Golden-section search; returns (argext, iterations).
template <typename F>
std::pair<double, int> golden_section(F f, double a, double b, bool find_max,
                                      double rel_tol = 1e-10) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > rel_tol * std::max(1.0, std::abs(a) + std::abs(b)) && it < 200) {
    bool keep_left = find_max ? (fc > fd) : (fc < fd);
    if (keep_left) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
    ++it;
  }
  return {0.5 * (a + b), it};
}

}  // namespace detail

/// Locates the interior extremum of b -> Var(u_b(X)) on `bracket` for a
/// model/family pair with a closed-form variance. Golden-section result is
/// cross-checked against bisection on a central-difference gradient. When the
/// variance is monotone on the bracket the report flags a boundary solution at
/// the lower-variance endpoint.
inline ExtremumReport find_variance_extremum(const TransformFamily& family,
                                             const DistributionModel& model, Interval bracket) {
  if (!bracket.bounded()) throw ValidationError("find_variance_extremum: bracket must be finite");
  auto f = [&](double b) { return analytic_u_moment(model, family.name, b).variance; };

  // Coarse probe to find a bracketing triple.
  const int k = 33;
  std::vector<double> xs(k), fs(k);
  for (int i = 0; i < k; ++i) {
    xs[i] = bracket.lo + (bracket.hi - bracket.lo) * i / (k - 1);
    if (i == 0 && bracket.lo_open) xs[i] = std::nextafter(xs[i], bracket.hi);
    if (i == k - 1 && bracket.hi_open) xs[i] = std::nextafter(xs[i], bracket.lo);
    fs[i] = f(xs[i]);
  }
  int best = -1;
  bool find_max = false;
  for (int i = 1; i + 1 < k; ++i) {
    if (fs[i] > fs[i - 1] && fs[i] > fs[i + 1]) { best = i; find_max = true; break; }
    if (fs[i] < fs[i - 1] && fs[i] < fs[i + 1]) { best = i; find_max = false; break; }
  }

  ExtremumReport rep;
  rep.bracket = bracket;
  if (best < 0) {
    rep.kind = ExtremumKind::boundary;
    bool lo_better = fs[0] < fs[k - 1];
    rep.parameter_star = lo_better ? xs[0] : xs[k - 1];
    rep.value_star = lo_better ? fs[0] : fs[k - 1];
    return rep;
  }

  auto [bstar, iters] = detail::golden_section(f, xs[best - 1], xs[best + 1], find_max);

  // Cross-validation: bisect the sign change of the central-difference
  // gradient over the same sub-bracket.
  auto grad = [&](double b) {
    double h = 1e-6 * std::max(1.0, std::abs(b));
    return (f(b + h) - f(b - h)) / (2.0 * h);
  };
  double lo = xs[best - 1], hi = xs[best + 1];
  for (int i = 0; i < 100 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++i) {
    double mid = 0.5 * (lo + hi);
    bool go_right = find_max ? grad(mid) > 0.0 : grad(mid) < 0.0;
    (go_right ? lo : hi) = mid;
  }
  double bstar_fd = 0.5 * (lo + hi);
  if (std::abs(bstar - bstar_fd) > 1e-5 * std::max(1.0, std::abs(bstar)))
    throw NumericalError("find_variance_extremum: golden-section and gradient-bisection disagree");

  rep.kind = ExtremumKind::interior_critical_point;
  // the gradient root localizes the flat extremum better than the
  // golden-section bracket (which drifts by ~sqrt(eps) once f(c) == f(d))
  rep.parameter_star = bstar_fd;
  rep.value_star = f(bstar_fd);
  rep.iterations = iters;
  return rep;
}

/// Root of (xi+1)^4 = (2 xi+1)^3 on [1, 20]; the scale-free location
/// (xi = b/L^2) of the barrier-crossing variance extremum under the
/// exp_inverse family.
inline double crossing_xi_star() {
  auto g = [](double x) {
    double p = (x + 1.0);
    double q = (2.0 * x + 1.0);
    return p * p * p * p - q * q * q;
  };
  double lo = 1.0, hi = 20.0;
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Closed-form extremal parameter of Var(exp(-bX)) for the positive stable
/// law: b_e = ((1-alpha) ln 2 / (2 - 2^alpha))^(1/alpha).
inline double stable_b_e(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("stable_b_e: alpha must be in (0,1)");
  double t = (1.0 - alpha) * std::log(2.0) / (2.0 - std::pow(2.0, alpha));
  return std::pow(t, 1.0 / alpha);
}

enum class CalibrationTarget { max_variance, max_ci_width };

/// Smallest grid parameter whose sample variance (or original-frame CI width)
/// meets the given bound; smallest because it distorts the data least.
inline double recommend_parameter(const TransformFamily& family, const SampleVector& x,
                                  CalibrationTarget target, double threshold,
                                  const std::vector<double>& grid, double level = 0.95) {
  ScanResult r = scan_parameter(family, x, grid, level);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.parameter_grid.size(); ++i) {
    double measure = target == CalibrationTarget::max_variance
                         ? r.variances[i]
                         : r.ci_uppers[i] - r.ci_lowers[i];
    if (measure <= threshold) return r.parameter_grid[i];
    best = std::min(best, measure);
  }
  throw ValidationError("recommend_parameter: target " + std::to_string(threshold) +
                        " unachievable on grid; best achieved " + std::to_string(best));
}

/// Grid helper: n points from lo to hi, linear or log spaced.
inline std::vector<double> make_grid(double lo, double hi, std::size_t n, bool log_spaced) {
  if (!(lo < hi) || n < 2) throw ValidationError("make_grid: need lo < hi and n >= 2");
  if (log_spaced && !(lo > 0.0)) throw ValidationError("make_grid: log spacing needs lo > 0");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  return g;
}

/// Default calibration grid for reciprocal_power scans: 50 log-spaced points
/// on [1, 100].
inline std::vector<double> default_grid() { return make_grid(1.0, 100.0, 50, true); }

}  // namespace umean

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "umean/errors.hpp"
#include "umean/estimation.hpp"
#include "umean/quadrature.hpp"
#include "umean/rng.hpp"
#include "umean/transform.hpp"

namespace umean {

/// Shifted Pareto: density alpha (1+x)^(-(1+alpha)) on [0, inf).
/// Mean infinite for alpha <= 1.
struct ParetoShifted {
  double alpha;
  double pdf(double x) const { return alpha * std::pow(1.0 + x, -(1.0 + alpha)); }
  double cdf(double x) const { return x <= 0.0 ? 0.0 : 1.0 - std::pow(1.0 + x, -alpha); }
  // Correct inverse of the CDF is (1-s)^(-1/alpha) - 1; a positive exponent
  // cannot produce a heavy tail.
  double quantile(double s) const { return std::pow(1.0 - s, -1.0 / alpha) - 1.0; }
};

/// First-passage time of standard Brownian motion to level L.
/// Density L (2 pi t^3)^(-1/2) exp(-L^2/(2t)) on (0, inf); infinite mean.
struct FirstPassage {
  double L;
  double pdf(double t) const {
    return L / std::sqrt(2.0 * M_PI * t * t * t) * std::exp(-L * L / (2.0 * t));
  }
};

/// One-sided stable law of index alpha in (0,1): E[exp(-bX)] = exp(-b^alpha).
struct PositiveStable {
  double alpha;
};

/// |T| for T Student-t with nu degrees of freedom; density
/// 2 C_nu (1+x^2/nu)^(-(nu+1)/2) on [0, inf).
struct HalfStudentT {
  double nu;
  double pdf(double x) const {
    double logc = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) - 0.5 * std::log(nu * M_PI);
    return 2.0 * std::exp(logc) * std::pow(1.0 + x * x / nu, -(nu + 1.0) / 2.0);
  }
};

/// X = s^(-1/2) with s uniform on (0,1]: finite mean 2, infinite variance.
struct PowerLawOnUnit {};

/// X = exp(Y) with Y a location-scale Student-t; every moment of X is
/// infinite.
struct LogStudentT {
  double nu;
  double location;
  double scale;
};

using DistributionModel =
    std::variant<ParetoShifted, FirstPassage, PositiveStable, HalfStudentT, PowerLawOnUnit, LogStudentT>;

inline std::string model_name(const DistributionModel& m) {
  struct V {
    std::string operator()(const ParetoShifted&) const { return "pareto"; }
    std::string operator()(const FirstPassage&) const { return "first_passage"; }
    std::string operator()(const PositiveStable&) const { return "stable"; }
    std::string operator()(const HalfStudentT&) const { return "half_t"; }
    std::string operator()(const PowerLawOnUnit&) const { return "powerlaw"; }
    std::string operator()(const LogStudentT&) const { return "log_t"; }
  };
  return std::visit(V{}, m);
}

namespace detail {

/// Kanter / Chambers-Mallows-Stuck draw for the one-sided stable law with
/// Laplace transform exp(-b^alpha).
inline double positive_stable_draw(Rng& rng, double alpha) {
  double theta = M_PI * rng.uniform01();
  double w = rng.exponential();
  double s = std::sin(theta);
  double a = std::sin(alpha * theta) / std::pow(s, 1.0 / alpha);
  double c = std::pow(std::sin((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
  return a * c;
}

}  // namespace detail

/// Draws n values from the model's support; output is a deterministic
/// function of (model, n, seed).
inline SampleVector sample(const DistributionModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample: n must be >= 1");
  Rng rng(seed);
  SampleVector out(n);
  if (auto* p = std::get_if<ParetoShifted>(&model)) {
    for (auto& v : out) v = p->quantile(rng.uniform01());
  } else if (auto* fp = std::get_if<FirstPassage>(&model)) {
    // tau_L equals L^2/Z^2 in distribution.
    for (auto& v : out) {
      double z = rng.normal();
      while (z == 0.0) z = rng.normal();
      v = fp->L * fp->L / (z * z);
    }
  } else if (auto* st = std::get_if<PositiveStable>(&model)) {
    if (!(st->alpha > 0.0 && st->alpha < 1.0)) throw ValidationError("stable: alpha must be in (0,1)");
    for (auto& v : out) v = detail::positive_stable_draw(rng, st->alpha);
  } else if (auto* ht = std::get_if<HalfStudentT>(&model)) {
    for (auto& v : out) v = std::abs(rng.student_t(ht->nu));
  } else if (std::get_if<PowerLawOnUnit>(&model)) {
    for (auto& v : out) v = 1.0 / std::sqrt(rng.uniform01());
  } else if (auto* lt = std::get_if<LogStudentT>(&model)) {
    for (auto& v : out) v = std::exp(lt->location + lt->scale * rng.student_t(lt->nu));
  }
  return out;
}

/// Mean and variance of u(X) together with the back-mapped predictor
/// u^{-1}(E[u(X)]).
struct UMoment {
  double mean;
  double variance;
  double predictor;
};

/// Closed forms for the shifted Pareto under u_b(x) = (1+x)^(-b).
/// Defined for all b > 0 (the bijection onto (0,1] needs no b >= 1).
inline UMoment pareto_u_moment(double alpha, double b) {
  if (!(alpha > 0.0) || !(b > 0.0)) throw ValidationError("pareto_u_moment: need alpha > 0, b > 0");
  UMoment m;
  m.mean = alpha / (b + alpha);
  m.variance = alpha * b * b / ((2.0 * b + alpha) * (b + alpha) * (b + alpha));
  m.predictor = std::pow((b + alpha) / alpha, 1.0 / b) - 1.0;
  return m;
}

/// Closed forms for the barrier-crossing time under u(t) = exp(-b/(2t)).
inline UMoment crossing_expinv_moment(double L, double b) {
  if (!(L > 0.0) || !(b > 0.0)) throw ValidationError("crossing_expinv_moment: need L > 0, b > 0");
  UMoment m;
  m.mean = L / std::sqrt(b + L * L);
  m.variance = L / std::sqrt(2.0 * b + L * L) - L * L / (b + L * L);
  m.predictor = b / std::log1p(b / (L * L));
  return m;
}

/// Closed forms for the barrier-crossing time under u(t) = exp(-c t).
inline UMoment crossing_exprate_moment(double L, double c) {
  if (!(L > 0.0) || !(c > 0.0)) throw ValidationError("crossing_exprate_moment: need L > 0, c > 0");
  UMoment m;
  m.mean = std::exp(-std::sqrt(2.0 * c) * L);
  m.variance = std::exp(-2.0 * std::sqrt(c) * L) - std::exp(-2.0 * std::sqrt(2.0 * c) * L);
  m.predictor = std::sqrt(2.0 / c) * L;
  return m;
}

/// Closed forms for the positive stable law under u_b(x) = exp(-b x).
inline UMoment stable_u_moment(double alpha, double b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("stable_u_moment: alpha must be in (0,1)");
  if (!(b > 0.0)) throw ValidationError("stable_u_moment: b must be > 0");
  UMoment m;
  m.mean = std::exp(-std::pow(b, alpha));
  m.variance = std::exp(-std::pow(2.0 * b, alpha)) - std::exp(-2.0 * std::pow(b, alpha));
  m.predictor = std::pow(b, alpha - 1.0);
  return m;
}

/// Gamma-quotient moments of u_b(x) = (1+x^2/nu)^(-b) under the half-t law.
/// Everything goes through lgamma so large b or nu do not overflow.
inline UMoment half_t_u_moment(double nu, double b) {
  if (!(nu > 0.0) || !(b > 0.0)) throw ValidationError("half_t_u_moment: need nu > 0, b > 0");
  auto moment = [nu](double q) {
    return std::exp(std::lgamma(q + nu / 2.0) + std::lgamma((nu + 1.0) / 2.0) -
                    std::lgamma(q + (nu + 1.0) / 2.0) - std::lgamma(nu / 2.0));
  };
  UMoment m;
  m.mean = moment(b);
  double m2 = moment(2.0 * b);
  m.variance = m2 - m.mean * m.mean;
  // Inverse of the kernel at the mean; m < 1 so m^(-1/b) - 1 > 0.
  m.predictor = std::sqrt(nu * (std::pow(m.mean, -1.0 / b) - 1.0));
  if (!std::isfinite(m.mean) || !std::isfinite(m.variance))
    throw NumericalError("half_t_u_moment: gamma evaluation overflowed");
  return m;
}

/// Independent oracle: E[u(X)^power] by double-exponential quadrature,
/// absolute tolerance 1e-9. Each model gets a substitution that removes its
/// heavy tail before integrating.
inline double quadrature_u_moment(const DistributionModel& model, const Transform& t, int power) {
  if (power != 1 && power != 2) throw ValidationError("quadrature_u_moment: power must be 1 or 2");
  auto up = [&](double x) { return power == 1 ? t.fwd(x) : t.fwd(x) * t.fwd(x); };

  if (auto* p = std::get_if<ParetoShifted>(&model)) {
    // s = F(x): integrate u(Q(s))^p over the unit interval.
    auto q = *p;
    return integrate_finite([q, up](double s) { return up(q.quantile(s)); }, 0.0, 1.0);
  }
  if (auto* fp = std::get_if<FirstPassage>(&model)) {
    // t = L^2/z^2 turns the t^(-3/2) tail into a Gaussian integral.
    double L = fp->L;
    return integrate_halfline([L, up](double z) {
      return 2.0 * up(L * L / (z * z)) * std::exp(-z * z / 2.0) / std::sqrt(2.0 * M_PI);
    });
  }
  if (auto* ht = std::get_if<HalfStudentT>(&model)) {
    // x = sqrt(nu) tan(theta) maps onto (0, pi/2) with weight cos^(nu-1).
    double nu = ht->nu;
    double logc = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) - 0.5 * std::log(nu * M_PI);
    double w = 2.0 * std::exp(logc) * std::sqrt(nu);
    return integrate_finite(
        [nu, w, up](double theta) {
          return w * up(std::sqrt(nu) * std::tan(theta)) * std::pow(std::cos(theta), nu - 1.0);
        },
        0.0, M_PI / 2.0);
  }
  if (std::get_if<PowerLawOnUnit>(&model)) {
    return integrate_finite([up](double s) { return up(1.0 / std::sqrt(s)); }, 0.0, 1.0);
  }
  throw ValidationError("quadrature_u_moment: no density available for model '" + model_name(model) + "'");
}

/// Population prediction error Var(u(X)) via the quadrature oracle.
inline double prediction_error(const DistributionModel& model, const Transform& t) {
  double m1 = quadrature_u_moment(model, t, 1);
  double m2 = quadrature_u_moment(model, t, 2);
  return m2 - m1 * m1;
}

/// Closed-form u-moments when the (model, family) pair has one.
inline UMoment analytic_u_moment(const DistributionModel& model, const std::string& family, double b) {
  if (auto* p = std::get_if<ParetoShifted>(&model)) {
    if (family == "reciprocal_power") return pareto_u_moment(p->alpha, b);
  } else if (auto* fp = std::get_if<FirstPassage>(&model)) {
    if (family == "exp_inverse") return crossing_expinv_moment(fp->L, b);
    if (family == "exp_rate") return crossing_exprate_moment(fp->L, b);
  } else if (auto* st = std::get_if<PositiveStable>(&model)) {
    if (family == "exp_rate") return stable_u_moment(st->alpha, b);
  } else if (auto* ht = std::get_if<HalfStudentT>(&model)) {
    if (family == "student_kernel") return half_t_u_moment(ht->nu, b);
  }
  throw ValidationError("analytic_u_moment: no closed form for model '" + model_name(model) +
                        "' with family '" + family + "'");
}

/// Closed-form MLE of the shifted-Pareto tail index: n / sum(log(1+x_i)).
inline double pareto_mle(const SampleVector& x) {
  if (x.empty()) throw ValidationError("pareto_mle: empty sample");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0))
      throw ValidationError("pareto_mle: negative value at row " + std::to_string(i + 1));
    s += std::log1p(x[i]);
  }
  if (s <= 0.0) throw ValidationError("pareto_mle: degenerate sample (all zeros)");
  return static_cast<double>(x.size()) / s;
}

struct StudentTFit {
  double nu;
  double location;
  double scale;
  double loglik;
  bool converged;
  bool nu_capped;  // likelihood flat in 1/nu; nu ran into the upper cap
};

namespace detail {

inline double student_t_loglik(const SampleVector& y, double nu, double loc, double scale) {
  double logc = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                0.5 * std::log(nu * M_PI) - std::log(scale);
  double ll = 0.0;
  for (double v : y) {
    double z = (v - loc) / scale;
    ll += logc - 0.5 * (nu + 1.0) * std::log1p(z * z / nu);
  }
  return ll;
}

/// Nelder-Mead simplex minimization.
template <typename F>
std::pair<std::vector<double>, bool> nelder_mead(F f, std::vector<double> x0, double step,
                                                 int max_iter = 4000, double tol = 1e-12) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) { p2[i] = pts[idx[i]]; f2[i] = fv[idx[i]]; }
    pts = std::move(p2);
    fv = std::move(f2);
  };

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::abs(fv[n] - fv[0]) <= tol * (std::abs(fv[0]) + tol)) { converged = true; break; }
    std::vector<double> cen(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cen[j] += pts[i][j] / static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = cen[j] + coef * (pts[n][j] - cen[j]);
      return p;
    };
    auto refl = blend(-1.0);
    double fr = f(refl);
    if (fr < fv[0]) {
      auto exp_ = blend(-2.0);
      double fe = f(exp_);
      if (fe < fr) { pts[n] = exp_; fv[n] = fe; } else { pts[n] = refl; fv[n] = fr; }
    } else if (fr < fv[n - 1]) {
      pts[n] = refl; fv[n] = fr;
    } else {
      auto con = blend(fr < fv[n] ? -0.5 : 0.5);
      double fc = f(con);
      if (fc < std::min(fr, fv[n])) {
        pts[n] = con; fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  return {pts[0], converged};
}

}  // namespace detail

/// Location-scale Student-t fit by simplex search from moment-based starting
/// values. nu runs on a bounded soft scale (cap 200) because the likelihood is
/// nearly flat in 1/nu for normal-like data.
inline StudentTFit student_t_mle(const SampleVector& y, double nu_cap = 200.0) {
  if (y.size() < 10) throw ValidationError("student_t_mle: need n >= 10");

  SampleVector s = y;
  std::sort(s.begin(), s.end());
  double med = s[s.size() / 2];
  SampleVector dev;
  dev.reserve(s.size());
  for (double v : s) dev.push_back(std::abs(v - med));
  std::sort(dev.begin(), dev.end());
  double mad = dev[dev.size() / 2];
  double scale0 = std::max(1.4826 * mad, 1e-8);

  // theta = (location, log scale, eta) with nu = cap * e^eta / (1 + e^eta).
  auto nu_of = [nu_cap](double eta) { return nu_cap / (1.0 + std::exp(-eta)); };
  auto neg_ll = [&](const std::vector<double>& th) {
    double nu = nu_of(th[2]);
    double scale = std::exp(th[1]);
    double ll = detail::student_t_loglik(y, nu, th[0], scale);
    return std::isfinite(ll) ? -ll : 1e300;
  };

  double eta0 = std::log(10.0 / (nu_cap - 10.0));
  std::vector<double> init{med, std::log(scale0), eta0};
  double ll_init = -neg_ll(init);
  auto [opt, converged] = detail::nelder_mead(neg_ll, init, 0.5);

  StudentTFit fit;
  fit.nu = nu_of(opt[2]);
  fit.location = opt[0];
  fit.scale = std::exp(opt[1]);
  fit.loglik = -neg_ll(opt);
  fit.converged = converged && fit.loglik >= ll_init;
  fit.nu_capped = fit.nu > 0.995 * nu_cap;
  if (!converged) throw NumericalError("student_t_mle: simplex search did not converge");
  return fit;
}

}  // namespace umean

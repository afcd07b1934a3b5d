// Acceptance suite: one line per criterion, PASS/FAIL, exit 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "umean/umean.hpp"

using namespace umean;

namespace {

int failures = 0;

void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  criterion %2d  %-38s  [%6.1fs]%s%s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              secs, detail.empty() ? "" : "  ", detail.c_str());
  if (!ok) ++failures;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

struct Welford {
  double sum = 0, sumsq = 0;
  std::size_t n = 0;
  void add(double x) { sum += x; sumsq += x * x; ++n; }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    double m = mean();
    return std::sqrt((sumsq / static_cast<double>(n) - m * m) / static_cast<double>(n - 1));
  }
};

}  // namespace

int main() {
  criterion(1, "exp_inverse crossing extremum", [](std::string& d) {
    double xi = crossing_xi_star();
    double var = crossing_expinv_moment(1.0, xi).variance;
    d = "xi*=" + std::to_string(xi) + " var=" + std::to_string(var);
    return close(xi, 5.2224, 0.0005) && close(var, 0.1349, 0.0005);
  });

  criterion(2, "exp_rate crossing extremum, L-free", [](std::string& d) {
    double sc = std::log(2.0) * (std::sqrt(2.0) + 1.0) / 4.0;  // sqrt(c)·L at the extremum
    double v1 = crossing_exprate_moment(1.0, sc * sc).variance;
    bool ok = close(v1, 0.1269, 0.0005);
    for (double L : {0.5, 1.0, 2.0}) {
      double c = sc * sc / (L * L);
      ok = ok && std::abs(crossing_exprate_moment(L, c).variance - v1) <= 1e-10;
    }
    d = "var=" + std::to_string(v1);
    return ok;
  });

  criterion(3, "Pareto closed forms vs quadrature", [](std::string& d) {
    auto m = pareto_u_moment(0.5, 1.0);
    DistributionModel model = ParetoShifted{0.5};
    auto t = make_transform("reciprocal_power", {1.0});
    double q1 = quadrature_u_moment(model, t, 1);
    double q2 = quadrature_u_moment(model, t, 2);
    d = "E[u]=" + std::to_string(m.mean) + " Var=" + std::to_string(m.variance) +
        " pred=" + std::to_string(m.predictor);
    return close(m.mean, 1.0 / 3.0, 1e-12) && close(m.variance, 0.088889, 5e-7) &&
           close(m.predictor, 2.0, 1e-12) && close(q1, m.mean, 1e-7) &&
           close(q2 - q1 * q1, m.variance, 1e-7);
  });

  criterion(4, "Monte-Carlo consistency + 1/sqrt(n) rate", [](std::string& d) {
    DistributionModel model = ParetoShifted{0.5};
    auto t = make_transform("reciprocal_power", {1.0});
    const std::size_t R = 200;
    Welford grand;
    for (std::size_t r = 0; r < R; ++r)
      grand.add(u_mean(t, sample(model, 100000, derive_seed(101, r))).transformed_mean);
    bool ok_mean = std::abs(grand.mean() - 1.0 / 3.0) <= 4.0 * grand.se();

    // mean absolute predictor error at three sample sizes, log-log slope
    std::vector<double> ns{100.0, 1000.0, 10000.0}, logn, logerr;
    for (double nd : ns) {
      Welford abse;
      for (std::size_t r = 0; r < R; ++r) {
        auto est = u_mean(t, sample(model, static_cast<std::size_t>(nd),
                                    derive_seed(static_cast<std::uint64_t>(202 + nd), r)));
        abse.add(std::abs(est.u_mean - 2.0));
      }
      logn.push_back(std::log(nd));
      logerr.push_back(std::log(abse.mean()));
    }
    double mx = (logn[0] + logn[1] + logn[2]) / 3.0, my = (logerr[0] + logerr[1] + logerr[2]) / 3.0;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
      sxy += (logn[i] - mx) * (logerr[i] - my);
      sxx += (logn[i] - mx) * (logn[i] - mx);
    }
    double slope = sxy / sxx;
    d = "slope=" + std::to_string(slope);
    return ok_mean && close(slope, -0.5, 0.15);
  });

  criterion(5, "CI coverage in [0.93, 0.97]", [](std::string& d) {
    DistributionModel model = ParetoShifted{0.5};
    auto t = make_transform("reciprocal_power", {1.0});
    const std::size_t R = 2000;
    std::size_t hit = 0;
    for (std::size_t r = 0; r < R; ++r) {
      auto est = u_mean(t, sample(model, 1000, derive_seed(303, r)));
      auto ci = ci_original(t, ci_transformed(est, 0.95));
      if (ci.lower <= 2.0 && 2.0 <= ci.upper) ++hit;
    }
    double cov = static_cast<double>(hit) / R;
    d = "coverage=" + std::to_string(cov);
    return cov >= 0.93 && cov <= 0.97;
  });

  criterion(6, "figure pipelines vs analytic curves", [](std::string& d) {
    // replication count 500 (paper used 5000; scaled for runtime, same seed scheme)
    auto fc = reproduce_figure("var-vs-b", 404, 500);
    bool ok = true;
    std::size_t g = fc.grid.size();
    // (a) variance decreasing in b: analytic and every averaged curve
    for (std::size_t i = 1; i < g && ok; ++i) ok = fc.analytic.variances[i] < fc.analytic.variances[i - 1];
    for (std::size_t s = 0; s < fc.sizes.size() && ok; ++s)
      for (std::size_t i = 1; i < g && ok; ++i)
        ok = fc.averaged[s].variances[i] < fc.averaged[s].variances[i - 1];
    if (!ok) { d = "monotonicity"; return false; }
    // (b) averaged mean curve heads to the analytic small-b limit at large b
    for (std::size_t s = 0; s < fc.sizes.size(); ++s) {
      const auto& um = fc.averaged[s].u_means;
      if (!(um.back() < 0.1 && um.back() < um.front())) { d = "large-b mean"; return false; }
    }
    // (c) averaged curves within 3 replication SEs of the analytic references.
    // The transformed-mean and variance estimators are exactly unbiased, so a
    // plain 3-SE band applies at every size. The back-mapped mean u^{-1}(u-bar)
    // carries a delta-method bias of g''(m) sigma^2 / (2n) with
    // g(m) = m^{-1/b} - 1; its band gets that much slack (x1.5 for the
    // higher-order remainder) and is only checked for n >= 500 where the
    // expansion is trustworthy.
    std::size_t bad = 0;
    for (std::size_t s = 0; s < fc.sizes.size(); ++s) {
      double n = static_cast<double>(fc.sizes[s]);
      for (std::size_t i = 0; i < g; ++i) {
        auto within = [&](double avg, double truth, double se, double slack) {
          if (std::abs(avg - truth) > 3.0 * se + slack) ++bad;
        };
        within(fc.averaged[s].transformed_means[i], fc.analytic.transformed_means[i],
               fc.averaged[s].transformed_mean_se[i], 0.0);
        within(fc.averaged[s].variances[i], fc.analytic.variances[i],
               fc.averaged[s].variance_se[i], 0.0);
        if (fc.sizes[s] >= 500) {
          double b = fc.grid[i];
          double m = fc.analytic.transformed_means[i];
          double g2 = (1.0 / b) * (1.0 / b + 1.0) * std::pow(m, -1.0 / b - 2.0);
          double bias = 0.5 * g2 * fc.analytic.variances[i] / n;
          within(fc.averaged[s].u_means[i], fc.analytic.u_means[i], fc.averaged[s].u_mean_se[i],
                 1.5 * std::abs(bias));
        }
      }
    }
    d = "band misses=" + std::to_string(bad);
    return bad == 0;
  });

  criterion(7, "stable law extremizer + Laplace identity", [](std::string& d) {
    double be = stable_b_e(0.5);
    auto r = find_variance_extremum(make_family("exp_rate"), DistributionModel{PositiveStable{0.5}},
                                    Interval::closed(0.05, 2.0));
    bool ok1 = std::abs(r.parameter_star - be) <= 1e-8;

    const std::size_t N = 1000000;
    SampleVector x = sample(DistributionModel{PositiveStable{0.5}}, N, 505);
    Welford w;
    for (double v : x) w.add(std::exp(-v));
    bool ok2 = std::abs(w.mean() - std::exp(-1.0)) <= 4.0 * w.se();
    d = "b_e=" + std::to_string(be) + " E[e^-X]=" + std::to_string(w.mean());
    return ok1 && ok2;
  });

  criterion(8, "half-Student-t moments and predictor", [](std::string& d) {
    bool ok = close(half_t_u_moment(1.0, 1.0).mean, 0.5, 1e-12);
    Rng rng(606);
    for (int k = 0; k < 20 && ok; ++k) {
      double nu = 0.5 + 4.0 * rng.uniform01();
      double b = 0.25 + 3.0 * rng.uniform01();
      auto m = half_t_u_moment(nu, b);
      double q = quadrature_u_moment(DistributionModel{HalfStudentT{nu}},
                                     make_transform("student_kernel", {b, nu}), 1);
      ok = close(m.mean, q, 1e-8);
      // predictor round-trips through the kernel transform
      auto t = make_transform("student_kernel", {b, nu});
      ok = ok && close(t.forward(m.predictor), m.mean, 1e-9);
    }
    d = ok ? "" : "mismatch";
    return ok;
  });

  criterion(9, "median and harmonic identities", [](std::string& d) {
    // u = F (shifted Pareto alpha=0.5): u-mean is the median, (1/2)^(-2)-1 = 3
    auto F = [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::pow(1.0 + x, -0.5); };
    auto t = cdf_transform(F, Interval::left_closed(0.0, std::numeric_limits<double>::infinity()));
    double eu = quadrature_u_moment(DistributionModel{ParetoShifted{0.5}}, t, 1);
    double med = t.inverse(eu);
    // harmonic mean of the unit power law: E[1/X] = 2/3, so 3/2
    double eh = quadrature_u_moment(DistributionModel{PowerLawOnUnit{}},
                                    make_transform("reciprocal"), 1);
    d = "median=" + std::to_string(med) + " harmonic=" + std::to_string(1.0 / eh);
    return close(eu, 0.5, 1e-8) && close(med, 3.0, 1e-6) && close(eh, 2.0 / 3.0, 1e-8) &&
           close(1.0 / eh, 1.5, 1e-7);
  });

  criterion(10, "restricted prediction", [](std::string& d) {
    Rng rng(707);
    auto t = make_transform("reciprocal_power", {1.0});
    for (int k = 0; k < 100; ++k) {
      std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 30);
      SampleVector x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = 10.0 * rng.uniform01();
        y[i] = 10.0 * rng.uniform01();
      }
      auto m = fit_in_u(t, x, y, polynomial_basis(0));
      double collapsed = predict_restricted(m, x[0]);
      if (std::abs(collapsed - u_mean(t, y).u_mean) > 1e-12) {
        d = "collapse failed at k=" + std::to_string(k);
        return false;
      }
    }
    auto lg = make_transform("log");
    SampleVector xs{1.0, 2.0, 4.0, 8.0, 16.0}, ys;
    for (double v : xs) ys.push_back(2.5 * std::pow(v, 1.25));
    auto m = fit_in_u(lg, xs, ys, polynomial_basis(1));
    d = "rms=" + std::to_string(m.residual_rms);
    return m.residual_rms < 1e-10;
  });

  criterion(11, "MLE recovery on bundled synthetic data", [](std::string& d) {
    std::string dir = UMEAN_DATA_DIR;
    auto losses = read_column_csv(dir + "/synthetic_hurricane_losses.csv");
    bool ok = losses.values.size() == 207;
    double alpha_hat = pareto_mle(losses.values);
    // asymptotic 95% band around the generating alpha: 1.96 * alpha / sqrt(n)
    double band = 1.96 * 1.046 / std::sqrt(207.0);
    ok = ok && std::abs(alpha_hat - 1.046) <= band;

    auto wealth = read_column_csv(dir + "/synthetic_log_wealth.csv");
    ok = ok && wealth.values.size() == 5777;
    SampleVector logs;
    for (double v : wealth.values) logs.push_back(std::log(v));
    auto fit = student_t_mle(logs);
    // 15% relative recovery of t(14, 12.74, 2.81)
    ok = ok && std::abs(fit.nu - 14.0) <= 0.15 * 14.0 &&
         std::abs(fit.location - 12.74) <= 0.15 * 12.74 &&
         std::abs(fit.scale - 2.81) <= 0.15 * 2.81 && !fit.nu_capped;
    d = "alpha=" + std::to_string(alpha_hat) + " nu=" + std::to_string(fit.nu) +
        " loc=" + std::to_string(fit.location) + " scale=" + std::to_string(fit.scale);
    return ok;
  });

  if (failures == 0) std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}

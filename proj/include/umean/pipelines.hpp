#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "umean/calibration.hpp"
#include "umean/csv.hpp"
#include "umean/distributions.hpp"
#include "umean/errors.hpp"
#include "umean/estimation.hpp"
#include "umean/transform.hpp"

namespace umean {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

inline std::vector<double> parse_params(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) {
    double v;
    if (!parse_double(p, v)) throw ValidationError("cannot parse parameter '" + p + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// "name" or "name:p1,p2" specs used by the CLI.
inline DistributionModel parse_model(const std::string& spec) {
  auto pos = spec.find(':');
  std::string name = spec.substr(0, pos);
  std::vector<double> p =
      pos == std::string::npos ? std::vector<double>{} : detail::parse_params(spec.substr(pos + 1));
  auto need = [&](std::size_t k) {
    if (p.size() != k)
      throw ValidationError("model '" + name + "' expects " + std::to_string(k) + " parameter(s)");
  };
  if (name == "pareto") { need(1); if (!(p[0] > 0)) throw ValidationError("pareto: alpha must be > 0"); return ParetoShifted{p[0]}; }
  if (name == "first_passage") { need(1); if (!(p[0] > 0)) throw ValidationError("first_passage: L must be > 0"); return FirstPassage{p[0]}; }
  if (name == "stable") { need(1); return PositiveStable{p[0]}; }
  if (name == "half_t") { need(1); if (!(p[0] > 0)) throw ValidationError("half_t: nu must be > 0"); return HalfStudentT{p[0]}; }
  if (name == "powerlaw") { need(0); return PowerLawOnUnit{}; }
  if (name == "log_t") { need(3); if (!(p[0] > 0) || !(p[2] > 0)) throw ValidationError("log_t: nu and scale must be > 0"); return LogStudentT{p[0], p[1], p[2]}; }
  throw ValidationError("unknown model '" + name + "'");
}

inline Transform parse_transform(const std::string& spec) {
  auto pos = spec.find(':');
  std::string name = spec.substr(0, pos);
  std::vector<double> p =
      pos == std::string::npos ? std::vector<double>{} : detail::parse_params(spec.substr(pos + 1));
  return make_transform(name, p);
}

/// Family spec: the scanned parameter is implicit; any value after ':' is the
/// family's fixed parameter (nu for student_kernel).
inline TransformFamily parse_family(const std::string& spec) {
  auto pos = spec.find(':');
  std::string name = spec.substr(0, pos);
  std::vector<double> fixed =
      pos == std::string::npos ? std::vector<double>{} : detail::parse_params(spec.substr(pos + 1));
  return make_family(name, fixed);
}

/// "lo:hi:n" or "lo:hi:n:log".
inline std::vector<double> parse_grid(const std::string& spec) {
  auto parts = detail::split(spec, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw ValidationError("grid spec must be lo:hi:n[:log]");
  double lo, hi, nd;
  if (!detail::parse_double(parts[0], lo) || !detail::parse_double(parts[1], hi) ||
      !detail::parse_double(parts[2], nd))
    throw ValidationError("cannot parse grid spec '" + spec + "'");
  bool log_spaced = false;
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "lin") throw ValidationError("grid spacing must be log or lin");
    log_spaced = parts[3] == "log";
  }
  return make_grid(lo, hi, static_cast<std::size_t>(nd), log_spaced);
}

/// End-to-end estimate on a dataset: u-mean plus intervals in both frames.
struct EstimateReport {
  std::size_t n = 0;
  UMeanEstimate estimate;
  bool has_ci = false;
  std::string ci_unavailable_reason;
  ConfidenceInterval transformed_ci;
  ConfidenceInterval original_ci;
};

inline EstimateReport run_estimate(const Transform& t, const SampleVector& x, double level) {
  EstimateReport rep;
  rep.n = x.size();
  rep.estimate = u_mean(t, x);
  if (rep.estimate.has_dispersion) {
    rep.has_ci = true;
    rep.transformed_ci = ci_transformed(rep.estimate, level);
    rep.original_ci = ci_original(t, rep.transformed_ci);
  } else {
    rep.ci_unavailable_reason = "n = 1: dispersion undefined, no interval";
  }
  return rep;
}

/// Replication pipelines behind the figure-reproduction command. All three
/// figure ids share the same single-sample and replication-averaged scans of
/// the shifted Pareto under the reciprocal_power family.
struct FigureCurves {
  std::string figure_id;
  std::vector<std::size_t> sizes;
  std::vector<double> grid;
  ScanResult analytic;                // closed-form reference
  std::vector<ScanResult> single;     // one sample per size
  std::vector<ScanResult> averaged;   // replication-averaged per size

  void write_csv(std::ostream& os) const {
    os.precision(17);
    os << "b,analytic";
    for (auto n : sizes) {
      if (figure_id == "ci-vs-b") {
        os << ",single_lo_n" << n << ",single_hi_n" << n << ",avg_lo_n" << n << ",avg_hi_n" << n;
      } else {
        os << ",single_n" << n << ",avg_n" << n << ",se_n" << n;
      }
    }
    os << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double ref = figure_id == "var-vs-b" ? analytic.variances[i] : analytic.u_means[i];
      os << grid[i] << ',' << ref;
      for (std::size_t s = 0; s < sizes.size(); ++s) {
        if (figure_id == "var-vs-b") {
          os << ',' << single[s].variances[i] << ',' << averaged[s].variances[i] << ','
             << averaged[s].variance_se[i];
        } else if (figure_id == "mean-vs-b") {
          os << ',' << single[s].u_means[i] << ',' << averaged[s].u_means[i] << ','
             << averaged[s].u_mean_se[i];
        } else {
          os << ',' << single[s].ci_lowers[i] << ',' << single[s].ci_uppers[i] << ','
             << averaged[s].ci_lowers[i] << ',' << averaged[s].ci_uppers[i];
        }
      }
      os << '\n';
    }
  }
};

inline FigureCurves reproduce_figure(const std::string& figure_id, std::uint64_t seed,
                                     std::size_t reps, double alpha = 0.5,
                                     std::vector<double> grid = default_grid(),
                                     double level = 0.95) {
  if (figure_id != "var-vs-b" && figure_id != "mean-vs-b" && figure_id != "ci-vs-b")
    throw ValidationError("unknown figure id '" + figure_id +
                          "' (expected var-vs-b, mean-vs-b or ci-vs-b)");
  DistributionModel model = ParetoShifted{alpha};
  TransformFamily family = make_family("reciprocal_power");

  FigureCurves fc;
  fc.figure_id = figure_id;
  fc.sizes = {100, 500, 1000, 5000};
  fc.grid = grid;
  fc.analytic = scan_parameter(family, model, grid);
  for (std::size_t s = 0; s < fc.sizes.size(); ++s) {
    std::size_t n = fc.sizes[s];
    SampleVector x = sample(model, n, derive_seed(seed, 1000000 + s));
    fc.single.push_back(scan_parameter(family, x, grid, level));
    fc.averaged.push_back(
        scan_parameter_replicated(family, model, grid, n, reps, level, derive_seed(seed, s)));
  }
  return fc;
}

}  // namespace umean

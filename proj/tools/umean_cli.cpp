// Command-line front end: estimate, scan, fit, simulate, reproduce.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "umean/umean.hpp"

namespace {

using nlohmann::json;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw umean::ValidationError("cannot write '" + path + "'");
  return file;
}

json ci_to_json(const umean::ConfidenceInterval& ci) {
  json j;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["level"] = ci.level;
  j["frame"] = ci.frame == umean::Frame::transformed ? "transformed" : "original";
  j["clamped_low"] = ci.clamped_low;
  j["clamped_high"] = ci.clamped_high;
  return j;
}

int cmd_estimate(const std::string& data, const std::string& transform, double level,
                 const std::string& out) {
  auto ds = umean::read_column_csv(data);
  auto t = umean::parse_transform(transform);
  auto rep = umean::run_estimate(t, ds.values, level);

  json j;
  j["n"] = rep.n;
  j["transform"] = transform;
  j["u_mean"] = rep.estimate.u_mean;
  j["transformed_mean"] = rep.estimate.transformed_mean;
  if (rep.has_ci) {
    j["transformed_sd"] = rep.estimate.transformed_sd_unbiased;
    j["ci_transformed"] = ci_to_json(rep.transformed_ci);
    j["ci_original"] = ci_to_json(rep.original_ci);
  } else {
    j["ci"] = nullptr;
    j["ci_unavailable_reason"] = rep.ci_unavailable_reason;
  }
  std::ofstream f;
  open_out(f, out) << j.dump(2) << "\n";
  return 0;
}

int cmd_scan(const std::string& data, const std::string& model, const std::string& family_spec,
             const std::string& grid_spec, std::size_t n, std::size_t reps, double level,
             std::uint64_t seed, const std::string& out) {
  auto family = umean::parse_family(family_spec);
  auto grid = umean::parse_grid(grid_spec);
  umean::ScanResult result;
  if (!data.empty()) {
    auto ds = umean::read_column_csv(data);
    result = umean::scan_parameter(family, ds.values, grid, level);
  } else if (!model.empty()) {
    auto m = umean::parse_model(model);
    if (reps > 1) {
      result = umean::scan_parameter_replicated(family, m, grid, n, reps, level, seed);
    } else if (n > 0) {
      auto x = umean::sample(m, n, seed);
      result = umean::scan_parameter(family, x, grid, level);
    } else {
      result = umean::scan_parameter(family, m, grid);
    }
  } else {
    throw umean::ValidationError("scan: need --data or --model");
  }
  std::ofstream f;
  result.write_csv(open_out(f, out));
  return 0;
}

int cmd_fit(const std::string& data, const std::string& model, const std::string& transform,
            double level, const std::string& out) {
  auto ds = umean::read_column_csv(data);
  json j;
  j["n"] = ds.values.size();
  j["model"] = model;
  if (model == "pareto") {
    double alpha = umean::pareto_mle(ds.values);
    j["alpha"] = alpha;
    double ll = 0.0;
    umean::ParetoShifted p{alpha};
    for (double v : ds.values) ll += std::log(p.pdf(v));
    j["loglik"] = ll;
  } else if (model == "student_t" || model == "log_t") {
    umean::SampleVector y = ds.values;
    if (model == "log_t") {
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0))
          throw umean::ValidationError("log_t fit: nonpositive value at row " + std::to_string(i + 1));
        y[i] = std::log(y[i]);
      }
    }
    auto fit = umean::student_t_mle(y);
    j["nu"] = fit.nu;
    j["location"] = fit.location;
    j["scale"] = fit.scale;
    j["loglik"] = fit.loglik;
    j["nu_capped"] = fit.nu_capped;
    if (fit.nu_capped) j["warning"] = "nu at upper cap; data is normal-like";
  } else {
    throw umean::ValidationError("fit: model must be pareto, student_t or log_t");
  }
  if (!transform.empty()) {
    auto t = umean::parse_transform(transform);
    auto rep = umean::run_estimate(t, ds.values, level);
    json e;
    e["u_mean"] = rep.estimate.u_mean;
    if (rep.has_ci) e["ci_original"] = ci_to_json(rep.original_ci);
    j["estimate"] = e;
  }
  std::ofstream f;
  open_out(f, out) << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& model, std::size_t n, std::uint64_t seed,
                 const std::string& out) {
  auto m = umean::parse_model(model);
  auto x = umean::sample(m, n, seed);
  std::ofstream f;
  umean::write_column_csv(open_out(f, out), "value", x);
  return 0;
}

int cmd_reproduce(const std::string& figure_id, std::size_t reps, std::uint64_t seed, double alpha,
                  const std::string& grid_spec, const std::string& out) {
  auto grid = umean::parse_grid(grid_spec);
  auto fc = umean::reproduce_figure(figure_id, seed, reps, alpha, grid);
  std::ofstream f;
  fc.write_csv(open_out(f, out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction and estimation of heavy-tailed variables via monotone coordinate transforms"};
  app.require_subcommand(1);

  std::string data, model, transform, out, figure_id;
  std::string grid = "1:100:50:log";
  double level = 0.95, alpha = 0.5;
  std::size_t n = 0, reps = 0, fig_reps = 500;
  std::uint64_t seed = 1;

  auto* est = app.add_subcommand("estimate", "u-mean and confidence intervals for a dataset");
  est->add_option("--data", data, "single-column CSV")->required();
  est->add_option("--transform", transform, "transform spec, e.g. log or reciprocal_power:1")->required();
  est->add_option("--level", level, "coverage probability");
  est->add_option("--out", out, "output path (default stdout)");

  auto* scan = app.add_subcommand("scan", "scan a transform family parameter");
  scan->add_option("--data", data, "single-column CSV (sample mode)");
  scan->add_option("--model", model, "model spec, e.g. pareto:0.5");
  scan->add_option("--transform", transform, "family spec, e.g. reciprocal_power")->required();
  scan->add_option("--grid", grid, "lo:hi:n[:log]");
  scan->add_option("--n", n, "sample size (with --model)");
  scan->add_option("--reps", reps, "replication count (averaged curves)");
  scan->add_option("--level", level, "coverage probability");
  scan->add_option("--seed", seed, "master seed");
  scan->add_option("--out", out, "output path");

  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit (pareto, student_t, log_t)");
  fit->add_option("--data", data, "single-column CSV")->required();
  fit->add_option("--model", model, "pareto | student_t | log_t")->required();
  fit->add_option("--transform", transform, "optional follow-on estimate transform");
  fit->add_option("--level", level, "coverage probability");
  fit->add_option("--out", out, "output path");

  auto* sim = app.add_subcommand("simulate", "draw a sample from a model");
  sim->add_option("--model", model, "model spec")->required();
  sim->add_option("--n", n, "sample size")->required();
  sim->add_option("--seed", seed, "seed");
  sim->add_option("--out", out, "output path");

  auto* rep = app.add_subcommand("reproduce", "figure-ready curve bundles");
  rep->add_option("figure", figure_id, "var-vs-b | mean-vs-b | ci-vs-b")->required();
  rep->add_option("--reps", fig_reps, "replication count");
  rep->add_option("--seed", seed, "master seed");
  rep->add_option("--alpha", alpha, "Pareto tail index");
  rep->add_option("--grid", grid, "lo:hi:n[:log]");
  rep->add_option("--out", out, "output path");

  try {
    app.parse(argc, argv);
    if (est->parsed()) return cmd_estimate(data, transform, level, out);
    if (scan->parsed()) return cmd_scan(data, model, transform, grid, n, reps, level, seed, out);
    if (fit->parsed()) return cmd_fit(data, model, transform, level, out);
    if (sim->parsed()) return cmd_simulate(model, n, seed, out);
    if (rep->parsed()) return cmd_reproduce(figure_id, fig_reps, seed, alpha, grid, out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const umean::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const umean::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

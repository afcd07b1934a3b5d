#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "umean/errors.hpp"
#include "umean/estimation.hpp"
#include "umean/transform.hpp"

namespace umean {

struct BasisFunction {
  std::string name;
  std::function<double(double)> fn;
};

/// {1, s, s^2, ..., s^degree} applied to the transformed regressor.
inline std::vector<BasisFunction> polynomial_basis(int degree) {
  std::vector<BasisFunction> basis;
  basis.push_back({"1", [](double) { return 1.0; }});
  for (int k = 1; k <= degree; ++k)
    basis.push_back({"s^" + std::to_string(k), [k](double s) { return std::pow(s, k); }});
  return basis;
}

/// A fitted value landed outside u(J); carries the raw transformed fit so the
/// caller can decide how to clamp.
class FittedValueOutsideImage : public NumericalError {
public:
  explicit FittedValueOutsideImage(double raw)
      : NumericalError("predict_restricted: fitted value " + std::to_string(raw) +
                       " outside transform image"),
        raw_value(raw) {}
  double raw_value;
};

/// Least-squares model in transformed coordinates: u(y) ~ sum a_k phi_k(u(x)).
struct RegressionModel {
  Transform transform;
  std::vector<BasisFunction> basis;
  std::vector<double> coefficients;
  double residual_rms = 0.0;

  double transformed_fit(double x_new) const {
    double s = transform.forward(x_new);
    double fit = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) fit += coefficients[k] * basis[k].fn(s);
    return fit;
  }
};

/// Restricted prediction via the congruent class: ordinary least squares on
/// the transformed data, solved by SVD rather than normal equations. Rank is
/// checked against a 1e-10 relative singular-value floor.
inline RegressionModel fit_in_u(const Transform& t, const SampleVector& x, const SampleVector& y,
                                std::vector<BasisFunction> basis) {
  if (basis.empty()) throw ValidationError("fit_in_u: empty basis");
  if (x.size() != y.size()) throw ValidationError("fit_in_u: length mismatch");
  const std::size_t n = x.size(), p = basis.size();
  if (n < p) throw ValidationError("fit_in_u: need n >= number of basis functions");
  detail::check_sample(t, x);
  detail::check_sample(t, y);

  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = t.fwd(x[i]);
    for (std::size_t k = 0; k < p; ++k) design(i, k) = basis[k].fn(s);
    target(i) = t.fwd(y[i]);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0))
    throw ValidationError("fit_in_u: design matrix is rank deficient");
  Eigen::VectorXd coef = svd.solve(target);

  RegressionModel m;
  m.transform = t;
  m.basis = std::move(basis);
  m.coefficients.assign(coef.data(), coef.data() + coef.size());
  m.residual_rms = std::sqrt((design * coef - target).squaredNorm() / static_cast<double>(n));
  return m;
}

/// u^{-1} of the fitted transformed value at x_new.
inline double predict_restricted(const RegressionModel& m, double x_new) {
  double fit = m.transformed_fit(x_new);
  if (!m.transform.image.contains(fit)) throw FittedValueOutsideImage(fit);
  return m.transform.inverse(fit);
}

}  // namespace umean

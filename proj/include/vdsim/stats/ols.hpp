#pragma once

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vdsim/error.hpp"

namespace vdsim::stats {

enum class SeKind { kClassic, kHC1 };

template <typename Scalar>
struct OlsFit {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<std::string> terms;
  Vector coefficients;
  Vector std_errors;
  Vector t_stats;
  Vector p_values;
  Vector residuals;
  Matrix covariance;
  Scalar r_squared = 0;
  Scalar adj_r_squared = 0;
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  SeKind se_kind = SeKind::kHC1;

  Eigen::Index term_index(const std::string& name) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i] == name) return static_cast<Eigen::Index>(i);
    }
    throw SchemaError("no term named '" + name + "' in fit");
  }
  Scalar coefficient(const std::string& name) const {
    return coefficients(term_index(name));
  }
  Scalar std_error(const std::string& name) const {
    return std_errors(term_index(name));
  }
  Scalar t_stat(const std::string& name) const {
    return t_stats(term_index(name));
  }
};

struct WaldTest {
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

namespace detail {

inline std::string term_name(std::span<const std::string> names,
                             Eigen::Index j) {
  if (static_cast<std::size_t>(j) < names.size()) return names[j];
  return "column " + std::to_string(j);
}

// Index of the first column that lies in the span of the columns before it.
template <typename Derived>
Eigen::Index first_dependent_column(const Eigen::MatrixBase<Derived>& X) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                               Eigen::Dynamic>;
  for (Eigen::Index j = 1; j <= X.cols(); ++j) {
    Eigen::ColPivHouseholderQR<Matrix> qr(X.leftCols(j));
    if (qr.rank() < j) return j - 1;
  }
  return X.cols() - 1;
}

}  // namespace detail

// Least squares fit of y on the columns of X. Throws EstimationError when X
// has fewer rows than columns plus one or is rank deficient, naming the
// first redundant column.
template <typename DerivedX, typename DerivedY>
OlsFit<typename DerivedX::Scalar> ols_fit(
    const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
    SeKind se_kind = SeKind::kHC1, std::span<const std::string> names = {}) {
  using Scalar = typename DerivedX::Scalar;
  using Fit = OlsFit<Scalar>;
  using Matrix = typename Fit::Matrix;

  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.rows() != n) {
    throw EstimationError("outcome has " + std::to_string(y.rows()) +
                          " rows, design has " + std::to_string(n));
  }
  if (k == 0) throw EstimationError("design matrix has no columns");
  if (n <= k) {
    throw EstimationError("need more observations (" + std::to_string(n) +
                          ") than regressors (" + std::to_string(k) + ")");
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  if (qr.rank() < k) {
    throw EstimationError(
        "design matrix is rank deficient: '" +
        detail::term_name(names, detail::first_dependent_column(X)) +
        "' is collinear with earlier columns");
  }

  Fit fit;
  fit.n = n;
  fit.k = k;
  fit.se_kind = se_kind;
  for (Eigen::Index j = 0; j < k; ++j) {
    fit.terms.push_back(detail::term_name(names, j));
  }
  fit.coefficients = qr.solve(y.derived());
  fit.residuals = y - X * fit.coefficients;

  const Matrix R = qr.matrixR().topLeftCorner(k, k).template triangularView<
      Eigen::Upper>();
  const Matrix r_inv = R.template triangularView<Eigen::Upper>().solve(
      Matrix::Identity(k, k));
  const Matrix p = qr.colsPermutation();
  const Matrix bread = p * (r_inv * r_inv.transpose()) * p.transpose();

  const Scalar dof = static_cast<Scalar>(n - k);
  if (se_kind == SeKind::kClassic) {
    const Scalar sigma2 = fit.residuals.squaredNorm() / dof;
    fit.covariance = sigma2 * bread;
  } else {
    const Matrix xe = X.derived().array().colwise() * fit.residuals.array();
    const Matrix meat = xe.transpose() * xe;
    fit.covariance = (static_cast<Scalar>(n) / dof) * bread * meat * bread;
  }
  fit.std_errors = fit.covariance.diagonal().cwiseSqrt();
  fit.t_stats = fit.coefficients.cwiseQuotient(fit.std_errors);

  boost::math::students_t_distribution<double> t_dist(
      static_cast<double>(n - k));
  fit.p_values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double t = static_cast<double>(fit.t_stats(j));
    fit.p_values(j) =
        std::isfinite(t)
            ? static_cast<Scalar>(2.0 * boost::math::cdf(
                                            boost::math::complement(
                                                t_dist, std::abs(t))))
            : Scalar(0);
  }

  const Scalar mean = y.mean();
  const Scalar sst = (y.array() - mean).matrix().squaredNorm();
  const Scalar ssr = fit.residuals.squaredNorm();
  fit.r_squared = sst > 0 ? Scalar(1) - ssr / sst : Scalar(0);
  fit.adj_r_squared = Scalar(1) - (Scalar(1) - fit.r_squared) *
                                      static_cast<Scalar>(n - 1) / dof;
  return fit;
}

// Wald test that the coefficients at `indices` are jointly zero, using the
// fit's covariance. Reported as F = W / q on (q, n - k) degrees of freedom.
template <typename Scalar>
WaldTest wald_test(const OlsFit<Scalar>& fit,
                   std::span<const Eigen::Index> indices) {
  using Matrix = typename OlsFit<Scalar>::Matrix;
  using Vector = typename OlsFit<Scalar>::Vector;
  const auto q = static_cast<Eigen::Index>(indices.size());
  if (q == 0) throw EstimationError("Wald test needs at least one term");
  Vector b(q);
  Matrix v(q, q);
  for (Eigen::Index a = 0; a < q; ++a) {
    b(a) = fit.coefficients(indices[a]);
    for (Eigen::Index c = 0; c < q; ++c) {
      v(a, c) = fit.covariance(indices[a], indices[c]);
    }
  }
  Eigen::LDLT<Matrix> ldlt(v);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw EstimationError("coefficient covariance is not positive definite");
  }
  const Scalar w = b.dot(ldlt.solve(b));
  WaldTest out;
  out.df1 = static_cast<double>(q);
  out.df2 = static_cast<double>(fit.n - fit.k);
  out.f = static_cast<double>(w) / out.df1;
  boost::math::fisher_f_distribution<double> dist(out.df1, out.df2);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.f));
  return out;
}

}  // namespace vdsim::stats

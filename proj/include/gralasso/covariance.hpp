#pragma once
// Robust correlation matrices, covariance assembly Sigma = S R S, and the
// square-root re-parameterisation Sigma^{1/2} = (v, W).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gralasso/common.hpp"
#include "gralasso/data.hpp"
#include "gralasso/robust_stats.hpp"

namespace gralasso {

enum class CorrelationEstimator { gaussian_rank, spearman, pearson };

inline std::string_view to_string(CorrelationEstimator e) {
  switch (e) {
    case CorrelationEstimator::gaussian_rank: return "gr";
    case CorrelationEstimator::spearman: return "spearman";
    case CorrelationEstimator::pearson: return "pearson";
  }
  return "?";
}

inline CorrelationEstimator parse_estimator(std::string_view s) {
  if (s == "gr" || s == "gaussian-rank") return CorrelationEstimator::gaussian_rank;
  if (s == "spearman") return CorrelationEstimator::spearman;
  if (s == "pearson") return CorrelationEstimator::pearson;
  fail("covariance", "unknown estimator '" + std::string(s) + "'");
}

struct CorrelationMatrix {
  Matrix entries;
  CorrelationEstimator estimator = CorrelationEstimator::gaussian_rank;
};

struct SymmetricEigen {
  Vector eigenvalues;  // descending
  Matrix eigenvectors;  // columns, orthonormal
};

struct SqrtFactors {
  Vector v;  // first column of Sigma^{1/2}
  Matrix W;  // remaining columns
};

/// Blocks of a joint (response, predictors) matrix with the response at index 0.
struct Partitions {
  double yy = 0.0;
  Vector xy;
  Matrix xx;
};

struct CovarianceModel {
  Matrix sigma;
  Vector scales;
  double sigma_yy = 0.0;
  Vector sigma_xy;
  Matrix sigma_xx;
  Vector sqrt_v;
  Matrix sqrt_W;
};

inline Partitions partition(const Matrix& joint) {
  const Eigen::Index p = joint.rows() - 1;
  return {joint(0, 0), joint.col(0).tail(p), joint.bottomRightCorner(p, p)};
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
inline SymmetricEigen symmetric_eigen(const Matrix& input) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) fail("covariance", "eigendecomposition needs a square matrix");
  const double scale = std::max(input.cwiseAbs().maxCoeff(), 1e-300);
  if ((input - input.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    fail("covariance", "matrix is not symmetric");
  }
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double stop = 1e-12 * input.norm();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 1; q < n; ++q) {
      for (Eigen::Index p = 0; p < q; ++p) off = std::max(off, std::abs(a(p, q)));
    }
    if (off <= stop) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop * 1e-3) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Symmetric square root V diag(sqrt(max(lambda, 0))) V^T split into (v, W).
/// Eigenvalues below -1e-8 * max|lambda| are rejected.
inline SqrtFactors sqrt_factorize(const Matrix& sigma) {
  const SymmetricEigen eig = symmetric_eigen(sigma);
  const double norm = std::max(eig.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  if (eig.eigenvalues.minCoeff() < -1e-8 * norm) fail("covariance", "not positive semi-definite");
  const Vector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const Matrix half = eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.transpose();
  return {half.col(0), half.rightCols(half.cols() - 1)};
}

namespace detail {

inline std::string column_label(const std::vector<std::string>& names, Eigen::Index j) {
  if (static_cast<std::size_t>(j) < names.size()) return "'" + names[static_cast<std::size_t>(j)] + "'";
  return "#" + std::to_string(j);
}

}  // namespace detail

/// Product-moment correlations of the columns of `z`. Each pair is summed in a fixed order.
inline Matrix pearson_correlation(const Matrix& z, const std::vector<std::string>& names = {}) {
  if (z.rows() < 2) fail("covariance", "need at least two observations");
  const Vector mean = z.colwise().mean();
  Matrix centered = z.rowwise() - mean.transpose();
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double ss = centered.col(j).squaredNorm();
    if (!(ss > 0.0)) fail("covariance", "zero-variance column " + detail::column_label(names, j));
    centered.col(j) /= std::sqrt(ss);
  }
  Matrix r(z.cols(), z.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    r(j, j) = 1.0;
    for (Eigen::Index k = j + 1; k < z.cols(); ++k) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.rows(); ++i) s += centered(i, j) * centered(i, k);
      s = std::clamp(s, -1.0, 1.0);
      r(j, k) = r(k, j) = s;
    }
  }
  return r;
}

/// Columnwise transform whose Pearson matrix defines the estimator: normal scores
/// for gaussian-rank, mid-ranks for spearman, the raw data for pearson.
inline Matrix working_columns(const DataMatrix& z, CorrelationEstimator estimator) {
  if (estimator == CorrelationEstimator::pearson) return z.values;
  if (z.n() < 3) fail("covariance", "need at least three observations");
  Matrix out(z.values.rows(), z.values.cols());
  for (Eigen::Index j = 0; j < z.values.cols(); ++j) {
    const auto col = z.column(static_cast<std::size_t>(j));
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col[0]; })) {
      fail("covariance", "degenerate column " + detail::column_label(z.names, j));
    }
    const std::vector<double> t =
        estimator == CorrelationEstimator::gaussian_rank ? normal_scores(col) : ranks(col);
    out.col(j) = Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size()));
  }
  return out;
}

inline CorrelationMatrix correlation_matrix(const DataMatrix& z, CorrelationEstimator estimator) {
  return {pearson_correlation(working_columns(z, estimator), z.names), estimator};
}

inline CorrelationMatrix pearson_corr_matrix(const DataMatrix& z) {
  return correlation_matrix(z, CorrelationEstimator::pearson);
}

inline CorrelationMatrix gaussian_rank_corr_matrix(const DataMatrix& z) {
  return correlation_matrix(z, CorrelationEstimator::gaussian_rank);
}

inline CorrelationMatrix spearman_corr_matrix(const DataMatrix& z) {
  return correlation_matrix(z, CorrelationEstimator::spearman);
}

inline CovarianceModel assemble_covariance(const CorrelationMatrix& r, std::span<const RobustSummary> summaries,
                                           const std::vector<std::string>& names = {}) {
  const Eigen::Index d = r.entries.rows();
  if (r.entries.cols() != d || static_cast<Eigen::Index>(summaries.size()) != d) {
    fail("covariance", "dimension mismatch between correlation matrix and scales");
  }
  if (d < 2) fail("covariance", "need a response and at least one predictor");
  CovarianceModel m;
  m.scales.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double s = summaries[static_cast<std::size_t>(j)].scale;
    if (!(s > 0.0)) fail("covariance", "nonpositive scale for column " + detail::column_label(names, j));
    m.scales(j) = s;
  }
  m.sigma = m.scales.asDiagonal() * r.entries * m.scales.asDiagonal();
  const Partitions parts = partition(m.sigma);
  m.sigma_yy = parts.yy;
  m.sigma_xy = parts.xy;
  m.sigma_xx = parts.xx;
  SqrtFactors f = sqrt_factorize(m.sigma);
  m.sqrt_v = std::move(f.v);
  m.sqrt_W = std::move(f.W);
  return m;
}

}  // namespace gralasso

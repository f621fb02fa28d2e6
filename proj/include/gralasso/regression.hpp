#pragma once
// Adaptive Lasso on a (robust) correlation matrix.
//
// The quadratic loss n*b'Gb - 2n*b'c with G = R_xx and c = R_xy equals
// n*||v - Wb||^2 up to a constant when (v, W) is the square root of the joint
// matrix, so every solver here works on (G, c) and never forms (v, W).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gralasso/common.hpp"
#include "gralasso/covariance.hpp"
#include "gralasso/data.hpp"
#include "gralasso/robust_stats.hpp"

namespace gralasso {

enum class WeightMode { automatic, direct, ridge, unit };
enum class SelectionRule { min, one_se };

inline std::string_view to_string(WeightMode m) {
  switch (m) {
    case WeightMode::automatic: return "auto";
    case WeightMode::direct: return "direct";
    case WeightMode::ridge: return "ridge";
    case WeightMode::unit: return "unit";
  }
  return "?";
}

inline std::string_view to_string(SelectionRule r) { return r == SelectionRule::min ? "min" : "1se"; }

struct AdaptiveWeights {
  Vector values;  // +infinity pins the coefficient at zero
  WeightMode source = WeightMode::direct;
  double kappa = 0.0;

  bool admissible(Eigen::Index j) const { return std::isfinite(values(j)); }
};

struct SolverControl {
  double tol = 1e-7;
  std::size_t max_iter = 10000;
};

struct CdResult {
  Vector beta;
  std::size_t sweeps = 0;
  bool converged = false;
};

struct LambdaGrid {
  std::vector<double> values;  // descending
  double lambda_max = 0.0;
  bool degenerate = false;
};

struct LassoPath {
  std::vector<double> lambdas;
  std::vector<Vector> coefficients;
  std::vector<std::vector<std::size_t>> supports;
  std::vector<std::size_t> iterations;
  bool converged = true;
};

struct CvCurve {
  std::vector<double> mean_error;
  std::vector<double> std_error;
  std::size_t chosen_min = 0;
  std::size_t chosen_1se = 0;
  std::size_t folds = 0;
  std::vector<std::string> warnings;
};

struct Destandardized {
  Vector beta;
  double intercept = 0.0;
};

struct FitOptions {
  CorrelationEstimator estimator = CorrelationEstimator::gaussian_rank;
  WeightMode weights = WeightMode::automatic;
  double kappa = 0.1;
  bool select_kappa = false;
  std::size_t folds = 5;
  std::size_t n_lambda = 100;
  std::optional<double> lambda_ratio;  // default 1e-3 when p < n, else 1e-2
  SelectionRule rule = SelectionRule::one_se;
  std::optional<double> lambda;  // fixed penalty; skips cross-validation
  std::uint64_t seed = 1;
  double exclusion_eps = 1e-10;
  SolverControl control;

  static FitOptions lasso() {
    FitOptions o;
    o.estimator = CorrelationEstimator::pearson;
    o.weights = WeightMode::unit;
    return o;
  }
  static FitOptions alasso() {
    FitOptions o;
    o.estimator = CorrelationEstimator::pearson;
    return o;
  }
};

struct SelectionFit {
  Vector beta;  // original units
  double intercept = 0.0;
  std::vector<std::size_t> support;  // 0-based predictor indices
  double lambda = 0.0;
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
  Vector beta_standardized;
  Vector initial_estimate;
  AdaptiveWeights weights;
  LassoPath path;
  CvCurve cv;
  bool cross_validated = false;
  std::vector<RobustSummary> summaries;  // response first
  CorrelationMatrix correlation;
  bool converged = true;
};

// ---------------------------------------------------------------------------
// Initial estimates and weights

namespace detail {

inline void check_system(const Matrix& gram, const Vector& c) {
  if (gram.rows() != gram.cols() || gram.rows() != c.size()) fail("regression", "dimension mismatch");
}

}  // namespace detail

/// Solves G b = c for a symmetric positive definite G.
inline Vector initial_estimate_direct(const Matrix& gram, const Vector& c) {
  detail::check_system(gram, c);
  const Vector eig = symmetric_eigen(gram).eigenvalues;
  const double hi = eig(0);
  const double lo = eig(eig.size() - 1);
  if (!(lo > 0.0) || hi / lo > 1e12) {
    fail("regression", "predictor covariance is singular or ill-conditioned; use ridge weights");
  }
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    fail("regression", "predictor covariance is not positive definite; use ridge weights");
  }
  return llt.solve(c);
}

inline Vector initial_estimate_direct(const CovarianceModel& m) {
  return initial_estimate_direct(m.sigma_xx, m.sigma_xy);
}

/// Solves (G + kappa I) b = c.
inline Vector initial_estimate_ridge(const Matrix& gram, const Vector& c, double kappa) {
  detail::check_system(gram, c);
  if (!(kappa > 0.0)) fail("regression", "ridge kappa must be positive");
  Matrix a = gram;
  a.diagonal().array() += kappa;
  Eigen::LDLT<Matrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) fail("regression", "ridge system could not be factorised");
  return ldlt.solve(c);
}

inline Vector initial_estimate_ridge(const CovarianceModel& m, double kappa) {
  return initial_estimate_ridge(m.sigma_xx, m.sigma_xy, kappa);
}

/// w_j = 1 / |b_j|, or +infinity when |b_j| <= exclusion_eps.
inline AdaptiveWeights adaptive_weights(const Vector& beta_init, double exclusion_eps = 1e-10) {
  if (exclusion_eps < 0.0) fail("regression", "exclusion threshold must be nonnegative");
  AdaptiveWeights w;
  w.values.resize(beta_init.size());
  for (Eigen::Index j = 0; j < beta_init.size(); ++j) {
    const double a = std::abs(beta_init(j));
    w.values(j) = a > exclusion_eps ? 1.0 / a : std::numeric_limits<double>::infinity();
  }
  return w;
}

inline AdaptiveWeights unit_weights(Eigen::Index p) {
  return {Vector::Ones(p), WeightMode::unit, 0.0};
}

// ---------------------------------------------------------------------------
// Penalty grid and coordinate descent

/// lambda_max = max_j 2n|c_j| / w_j over admissible j, then a log-spaced grid to lambda_max * ratio.
inline LambdaGrid lambda_grid(const Vector& c, const AdaptiveWeights& w, std::size_t n, std::size_t n_lambda,
                              double ratio) {
  if (n_lambda < 2) fail("regression", "need at least two penalty values");
  if (!(ratio > 0.0 && ratio < 1.0)) fail("regression", "penalty ratio must lie in (0, 1)");
  if (c.size() != w.values.size()) fail("regression", "dimension mismatch");
  LambdaGrid grid;
  bool any = false;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (!w.admissible(j)) continue;
    any = true;
    grid.lambda_max = std::max(grid.lambda_max, 2.0 * static_cast<double>(n) * std::abs(c(j)) / w.values(j));
  }
  if (!any) fail("regression", "no admissible predictors");
  if (!(grid.lambda_max > 0.0)) {
    grid.degenerate = true;
    grid.values = {0.0};
    return grid;
  }
  grid.values.resize(n_lambda);
  const double step = std::log(ratio) / static_cast<double>(n_lambda - 1);
  for (std::size_t k = 0; k < n_lambda; ++k) {
    grid.values[k] = grid.lambda_max * std::exp(step * static_cast<double>(k));
  }
  grid.values.front() = grid.lambda_max;
  return grid;
}

/// n*b'Gb - 2n*b'c + lambda * sum_j w_j |b_j| (the constant n*Sigma_yy is omitted).
inline double lasso_objective(const Matrix& gram, const Vector& c, const AdaptiveWeights& w, double lambda,
                              std::size_t n, const Vector& b) {
  const double nn = static_cast<double>(n);
  double penalty = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (b(j) != 0.0) penalty += w.values(j) * std::abs(b(j));
  }
  return nn * b.dot(gram * b) - 2.0 * nn * b.dot(c) + lambda * penalty;
}

/// Largest violation of the optimality conditions, in the units of the objective gradient.
inline double kkt_violation(const Matrix& gram, const Vector& c, const AdaptiveWeights& w, double lambda,
                            std::size_t n, const Vector& b) {
  const Vector grad = 2.0 * static_cast<double>(n) * (gram * b - c);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (!w.admissible(j)) {
      if (b(j) != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    const double pen = lambda * w.values(j);
    const double v = b(j) != 0.0 ? std::abs(grad(j) + pen * (b(j) > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(grad(j)) - pen);
    worst = std::max(worst, v);
  }
  return worst;
}

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

/// Cyclic coordinate descent for n*b'Gb - 2n*b'c + lambda*sum w_j|b_j|.
/// Stops once a sweep moves no coordinate by more than tol and the KKT
/// residual is within 2*tol*n. On hitting max_iter the last iterate is
/// returned with converged = false.
inline CdResult weighted_lasso_cd(const Matrix& gram, const Vector& c, const AdaptiveWeights& w, double lambda,
                                  std::size_t n, const Vector& warm, const SolverControl& control = {}) {
  detail::check_system(gram, c);
  const Eigen::Index p = c.size();
  if (w.values.size() != p || warm.size() != p) fail("regression", "dimension mismatch");
  if (lambda < 0.0) fail("regression", "penalty must be nonnegative");
  const double nn = static_cast<double>(n);

  CdResult out;
  out.beta = warm;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!w.admissible(j)) {
      out.beta(j) = 0.0;
    } else if (!(gram(j, j) > 0.0)) {
      fail("regression", "degenerate predictor variance at index " + std::to_string(j));
    }
  }
  Vector resid = c - gram * out.beta;  // c - G b

  while (out.sweeps < control.max_iter) {
    ++out.sweeps;
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!w.admissible(j)) continue;
      const double gjj = gram(j, j);
      const double old = out.beta(j);
      const double z = resid(j) + gjj * old;
      const double updated = soft_threshold(z, lambda * w.values(j) / (2.0 * nn)) / gjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        resid.noalias() -= delta * gram.col(j);
        out.beta(j) = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < control.tol) {
      resid = c - gram * out.beta;
      if (kkt_violation(gram, c, w, lambda, n, out.beta) <= 2.0 * control.tol * nn) {
        out.converged = true;
        break;
      }
    }
  }
  return out;
}

inline std::vector<std::size_t> support_of(const Vector& b) {
  std::vector<std::size_t> s;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (b(j) != 0.0) s.push_back(static_cast<std::size_t>(j));
  }
  return s;
}

/// Sweeps a descending grid. With warm_start each solution seeds the next.
inline LassoPath fit_path(const Matrix& gram, const Vector& c, const AdaptiveWeights& w,
                          const std::vector<double>& lambdas, std::size_t n, const SolverControl& control = {},
                          bool warm_start = true) {
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    if (lambdas[k] > lambdas[k - 1]) fail("regression", "penalty grid must be descending");
  }
  LassoPath path;
  path.lambdas = lambdas;
  Vector current = Vector::Zero(c.size());
  for (double lambda : lambdas) {
    CdResult r = weighted_lasso_cd(gram, c, w, lambda, n, warm_start ? current : Vector::Zero(c.size()), control);
    path.converged = path.converged && r.converged;
    path.iterations.push_back(r.sweeps);
    path.supports.push_back(support_of(r.beta));
    current = r.beta;
    path.coefficients.push_back(std::move(r.beta));
  }
  return path;
}

// ---------------------------------------------------------------------------
// Cross-validation on the pseudo-dataset

namespace detail {

struct ColumnMoments {
  Vector mean;
  Vector sd;
};

inline ColumnMoments column_moments(const Matrix& m) {
  ColumnMoments out{m.colwise().mean(), Vector(m.cols())};
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out.sd(j) = std::sqrt((m.col(j).array() - out.mean(j)).square().sum() / static_cast<double>(m.rows() - 1));
  }
  return out;
}

inline Matrix take_rows(const Matrix& m, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace detail

/// K-fold CV on the pseudo-dataset (column 0 = response). Each fold refits the
/// path on the Pearson matrix of its training rows and scores held-out rows in
/// training-standardised units. `n_scale` is the sample size that sets the
/// penalty threshold lambda*w/(2n); by default the full number of rows.
inline CvCurve cross_validate(const Matrix& pseudo, const AdaptiveWeights& w, const std::vector<double>& lambdas,
                              std::size_t folds, std::uint64_t seed, const SolverControl& control = {},
                              std::optional<std::size_t> n_scale = std::nullopt) {
  const auto n = static_cast<std::size_t>(pseudo.rows());
  const auto p = static_cast<std::size_t>(pseudo.cols()) - 1;
  if (folds < 2) fail("regression", "need at least two folds");
  if (n < folds) fail("regression", "fewer rows than folds");
  if (lambdas.empty()) fail("regression", "empty penalty grid");

  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  const std::size_t nl = lambdas.size();
  std::vector<std::vector<double>> err(folds, std::vector<double>(nl, 0.0));
  CvCurve cv;
  cv.folds = folds;

  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t begin = f * n / folds;
    const std::size_t end = (f + 1) * n / folds;
    std::vector<Eigen::Index> test(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                                   perm.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<Eigen::Index> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(begin));
    train.insert(train.end(), perm.begin() + static_cast<std::ptrdiff_t>(end), perm.end());
    if (p < n && train.size() < p + 2) {
      cv.warnings.push_back("fold " + std::to_string(f + 1) + " has " + std::to_string(train.size()) +
                            " training rows for " + std::to_string(p) + " predictors");
    }

    const Matrix train_rows = detail::take_rows(pseudo, train);
    const detail::ColumnMoments mom = detail::column_moments(train_rows);
    const Partitions parts = partition(pearson_correlation(train_rows));
    const LassoPath path = fit_path(parts.xx, parts.xy, w, lambdas, n_scale.value_or(n), control);

    Matrix held = detail::take_rows(pseudo, test);
    for (Eigen::Index j = 0; j < held.cols(); ++j) {
      held.col(j) = (held.col(j).array() - mom.mean(j)) / mom.sd(j);
    }
    const Vector y = held.col(0);
    const Matrix x = held.rightCols(static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < nl; ++k) {
      err[f][k] = (y - x * path.coefficients[k]).squaredNorm() / static_cast<double>(test.size());
    }
  }

  cv.mean_error.assign(nl, 0.0);
  cv.std_error.assign(nl, 0.0);
  const double kf = static_cast<double>(folds);
  for (std::size_t k = 0; k < nl; ++k) {
    double mean = 0.0;
    for (std::size_t f = 0; f < folds; ++f) mean += err[f][k];
    mean /= kf;
    double ss = 0.0;
    for (std::size_t f = 0; f < folds; ++f) ss += (err[f][k] - mean) * (err[f][k] - mean);
    cv.mean_error[k] = mean;
    cv.std_error[k] = std::sqrt(ss / (kf - 1.0)) / std::sqrt(kf);
  }
  cv.chosen_min = static_cast<std::size_t>(
      std::min_element(cv.mean_error.begin(), cv.mean_error.end()) - cv.mean_error.begin());
  const double threshold = cv.mean_error[cv.chosen_min] + cv.std_error[cv.chosen_min];
  cv.chosen_1se = cv.chosen_min;
  for (std::size_t k = 0; k < nl; ++k) {
    if (cv.mean_error[k] <= threshold) {
      cv.chosen_1se = k;  // first hit on a descending grid = largest qualifying lambda
      break;
    }
  }
  return cv;
}

// ---------------------------------------------------------------------------
// Back-transformation and screening

/// beta_j = b_j * s_y / s_xj and intercept = mu_y - mu_x' beta. summaries[0] is the response.
inline Destandardized destandardize(const Vector& beta_std, std::span<const RobustSummary> summaries) {
  if (static_cast<Eigen::Index>(summaries.size()) != beta_std.size() + 1) {
    fail("regression", "need one summary per predictor plus the response");
  }
  Destandardized out{Vector(beta_std.size()), summaries[0].location};
  for (Eigen::Index j = 0; j < beta_std.size(); ++j) {
    const RobustSummary& s = summaries[static_cast<std::size_t>(j) + 1];
    if (!(s.scale > 0.0)) fail("regression", "zero scale for predictor " + std::to_string(j + 1));
    out.beta(j) = beta_std(j) * summaries[0].scale / s.scale;
    out.intercept -= s.location * out.beta(j);
  }
  return out;
}

struct ScreenedPredictor {
  std::size_t index;  // 0-based predictor index
  double correlation;
};

/// The k predictors with the largest |Gaussian-rank correlation| with the response;
/// ties keep column order.
inline std::vector<ScreenedPredictor> screen_top_k(const DataMatrix& z, std::size_t k) {
  const std::size_t p = z.p();
  if (k < 1 || k > p) fail("regression", "screening size must lie in [1, p]");
  auto standardized_scores = [&](std::size_t j) {
    const std::vector<double> s = normal_scores(z.column(j));
    Vector v = Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
    v.array() -= v.mean();
    const double norm = v.norm();
    if (!(norm > 0.0)) fail("regression", "degenerate column '" + z.names[j] + "'");
    return Vector(v / norm);
  };
  const Vector y = standardized_scores(0);
  std::vector<ScreenedPredictor> all(p);
  for (std::size_t j = 0; j < p; ++j) all[j] = {j, std::clamp(y.dot(standardized_scores(j + 1)), -1.0, 1.0)};
  std::stable_sort(all.begin(), all.end(), [](const ScreenedPredictor& a, const ScreenedPredictor& b) {
    return std::abs(a.correlation) > std::abs(b.correlation);
  });
  all.resize(k);
  return all;
}

// ---------------------------------------------------------------------------
// Full pipeline

namespace detail {

inline std::vector<RobustSummary> column_summaries(const DataMatrix& z, CorrelationEstimator estimator) {
  std::vector<RobustSummary> out;
  for (std::size_t j = 0; j < z.names.size(); ++j) {
    const auto col = z.column(j);
    if (estimator == CorrelationEstimator::pearson) {
      const Eigen::Map<const Vector> v(col.data(), static_cast<Eigen::Index>(col.size()));
      const double mean = v.mean();
      const double sd = std::sqrt((v.array() - mean).square().sum() / static_cast<double>(col.size() - 1));
      out.push_back({mean, sd});
    } else {
      out.push_back(robust_summary(col));
    }
  }
  return out;
}

inline Matrix standardize_columns(Matrix m) {
  const ColumnMoments mom = column_moments(m);
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = (m.col(j).array() - mom.mean(j)) / mom.sd(j);
  return m;
}

}  // namespace detail

/// Robust summaries -> working columns -> correlation matrix -> initial estimate ->
/// adaptive weights -> penalty grid -> path -> pseudo-data CV -> back-transform.
/// The estimator tag switches the correlation (and, for pearson, mean/sd scaling).
inline SelectionFit fit_gr_alasso(const DataMatrix& z, const FitOptions& opt = {}) {
  const std::size_t n = z.n();
  const std::size_t p = z.p();
  if (n < 10) fail("regression", "need at least 10 observations");
  if (p < 1) fail("regression", "need at least one predictor");

  SelectionFit fit;
  fit.summaries = detail::column_summaries(z, opt.estimator);
  const Matrix working = detail::standardize_columns(working_columns(z, opt.estimator));
  fit.correlation = {pearson_correlation(working, z.names), opt.estimator};
  const Partitions parts = partition(fit.correlation.entries);
  const double ratio = opt.lambda_ratio.value_or(p < n ? 1e-3 : 1e-2);

  auto ridge_weights = [&](double kappa) {
    fit.initial_estimate = initial_estimate_ridge(parts.xx, parts.xy, kappa);
    AdaptiveWeights w = adaptive_weights(fit.initial_estimate, opt.exclusion_eps);
    w.source = WeightMode::ridge;
    w.kappa = kappa;
    return w;
  };

  WeightMode mode = opt.weights;
  if (mode == WeightMode::automatic) mode = 2 * p < n ? WeightMode::direct : WeightMode::ridge;
  if (mode == WeightMode::direct) {
    try {
      fit.initial_estimate = initial_estimate_direct(parts.xx, parts.xy);
      fit.weights = adaptive_weights(fit.initial_estimate, opt.exclusion_eps);
      fit.weights.source = WeightMode::direct;
    } catch (const Error&) {
      if (opt.weights != WeightMode::automatic) throw;
      mode = WeightMode::ridge;
    }
  }
  if (mode == WeightMode::ridge) {
    if (opt.select_kappa) {
      double best_error = std::numeric_limits<double>::infinity();
      double best_kappa = opt.kappa;
      for (double kappa : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const AdaptiveWeights w = ridge_weights(kappa);
        const LambdaGrid g = lambda_grid(parts.xy, w, n, opt.n_lambda, ratio);
        const CvCurve cv = cross_validate(working, w, g.values, opt.folds, opt.seed, opt.control);
        if (cv.mean_error[cv.chosen_min] < best_error) {
          best_error = cv.mean_error[cv.chosen_min];
          best_kappa = kappa;
        }
      }
      fit.weights = ridge_weights(best_kappa);
    } else {
      fit.weights = ridge_weights(opt.kappa);
    }
  }
  if (mode == WeightMode::unit) {
    fit.initial_estimate = Vector::Ones(static_cast<Eigen::Index>(p));
    fit.weights = unit_weights(static_cast<Eigen::Index>(p));
  }

  const LambdaGrid grid = lambda_grid(parts.xy, fit.weights, n, opt.n_lambda, ratio);
  fit.path = fit_path(parts.xx, parts.xy, fit.weights, grid.values, n, opt.control);
  fit.converged = fit.path.converged;

  if (opt.lambda) {
    if (*opt.lambda < 0.0) fail("regression", "penalty must be nonnegative");
    fit.lambda = fit.lambda_min = fit.lambda_1se = *opt.lambda;
    std::size_t nearest = 0;
    while (nearest + 1 < grid.values.size() && grid.values[nearest + 1] >= *opt.lambda) ++nearest;
    const CdResult r = weighted_lasso_cd(parts.xx, parts.xy, fit.weights, *opt.lambda, n,
                                         fit.path.coefficients[nearest], opt.control);
    fit.converged = fit.converged && r.converged;
    fit.beta_standardized = r.beta;
  } else {
    fit.cv = cross_validate(working, fit.weights, grid.values, opt.folds, opt.seed, opt.control);
    fit.cross_validated = true;
    fit.lambda_min = grid.values[fit.cv.chosen_min];
    fit.lambda_1se = grid.values[fit.cv.chosen_1se];
    const std::size_t chosen = opt.rule == SelectionRule::min ? fit.cv.chosen_min : fit.cv.chosen_1se;
    fit.lambda = grid.values[chosen];
    fit.beta_standardized = fit.path.coefficients[chosen];
  }

  const Destandardized d = destandardize(fit.beta_standardized, fit.summaries);
  fit.beta = d.beta;
  fit.intercept = d.intercept;
  fit.support = support_of(fit.beta_standardized);
  return fit;
}

}  // namespace gralasso

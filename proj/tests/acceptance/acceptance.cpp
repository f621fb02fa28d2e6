// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gralasso/cli.hpp"
#include "gralasso/simulation.hpp"
#include "../oracles.hpp"

using namespace gralasso;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s  [%d] %s | %s | %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs, budget_s, in_time ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

Vector active_beta(std::size_t p) {
  Vector b = Vector::Zero(static_cast<Eigen::Index>(p));
  b.head(5).setOnes();
  return b;
}

// 1. pearson, lambda = 0, p = 5, n = 100 against normal equations.
Outcome ols_equivalence() {
  SimDesign d;
  d.n = 100;
  d.p = 5;
  d.beta_true = Vector(5);
  d.beta_true << 1.0, -0.5, 0.25, 0.0, 2.0;
  d.seed = 101;
  const Matrix x = gen_design(d);
  const Vector y = (gen_response(x, d.beta_true, 1.0, 102).array() + 4.0).matrix();
  cli::RunConfig c;
  c.estimator = "pearson";
  c.lambda = 0.0;
  const SelectionFit fit = fit_gr_alasso(DataMatrix::from_parts(y, x), cli::fit_options(c));
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(x.rows()));
  std::vector<double> yy(y.data(), y.data() + y.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(x(i, j));
  }
  const auto ols = oracle::ols_with_intercept(rows, yy);
  double worst = std::abs(fit.intercept - ols[0]);
  for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(fit.beta(j) - ols[static_cast<std::size_t>(j) + 1]));
  return {worst <= 1e-6, "max |coef - OLS| = " + fmt("%.3g", worst) + " (tol 1e-6)"};
}

// 2. coordinate descent vs exhaustive grid minimisation, plus KKT on whole paths.
Outcome solver_correctness() {
  std::mt19937_64 rng(202);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  double worst_gap = 0.0, worst_kkt_ratio = 0.0;
  const std::size_t n = 50;
  const SolverControl control;
  for (int inst = 0; inst < 50; ++inst) {
    const int p = 1 + inst % 3;
    Matrix a(p + 5, p);
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < p; ++j) a(i, j) = normal(rng);
    }
    Matrix g = a.transpose() * a;
    const Vector s = g.diagonal().cwiseSqrt().cwiseInverse();
    g = s.asDiagonal() * g * s.asDiagonal();
    Vector c(p);
    for (int j = 0; j < p; ++j) c(j) = 0.5 * normal(rng);
    AdaptiveWeights w;
    w.values = Vector::NullaryExpr(p, [&](Eigen::Index) { return 0.3 + 3.0 * unif(rng); });
    const LambdaGrid grid = lambda_grid(c, w, n, 20, 1e-3);
    const double lambda = unif(rng) * grid.lambda_max;
    const Vector b = weighted_lasso_cd(g, c, w, lambda, n, Vector::Zero(p), control).beta;
    auto f = [&](const std::vector<double>& v) {
      return lasso_objective(g, c, w, lambda, n, Eigen::Map<const Vector>(v.data(), p));
    };
    const auto best = oracle::grid_minimize(f, std::vector<double>(static_cast<std::size_t>(p), 0.0), 8.0, 1e-6);
    for (int j = 0; j < p; ++j) worst_gap = std::max(worst_gap, std::abs(b(j) - best[static_cast<std::size_t>(j)]));
    const LassoPath path = fit_path(g, c, w, grid.values, n, control);
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
      const double v = kkt_violation(g, c, w, grid.values[k], n, path.coefficients[k]);
      worst_kkt_ratio = std::max(worst_kkt_ratio, v / (10.0 * control.tol * n));
    }
  }
  return {worst_gap <= 1e-4 && worst_kkt_ratio <= 1.0,
          "max |CD - grid| = " + fmt("%.3g", worst_gap) + " (tol 1e-4); max KKT / bound = " +
              fmt("%.3g", worst_kkt_ratio)};
}

// 3. GR correlation at rho = 0.5 and Qn at the normal model.
Outcome estimator_consistency() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal;
  Vector y(10000);
  Matrix x(10000, 1);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = normal(rng), b = normal(rng);
    y(i) = a;
    x(i, 0) = 0.5 * a + std::sqrt(0.75) * b;
  }
  const double r = gaussian_rank_corr_matrix(DataMatrix::from_parts(y, x)).entries(0, 1);
  std::vector<double> z(100000);
  for (double& v : z) v = normal(rng);
  const double q = qn_scale(z);
  return {std::abs(r - 0.5) <= 0.03 && std::abs(q - 1.0) <= 0.02,
          "GR r = " + fmt("%.4f", r) + " (0.5 +- 0.03); Qn = " + fmt("%.4f", q) + " (1 +- 0.02)"};
}

// 4. row propagation 1 - (1 - e)^p.
Outcome propagation() {
  SimDesign d;
  double sum = 0.0;
  for (std::uint64_t r = 0; r < 500; ++r) {
    d.seed = derive_seed(404, r);
    sum += contaminated_row_fraction(contaminate_cells(gen_design(d), {0.05, 10.0}, derive_seed(405, r)).mask);
  }
  const double observed = sum / 500.0, expected = 1.0 - std::pow(0.95, 20);
  return {std::abs(observed - expected) <= 0.02,
          "row fraction = " + fmt("%.4f", observed) + " (expected " + fmt("%.4f", expected) + " +- 0.02)"};
}

const AggregateRow& find_row(const std::vector<AggregateRow>& rows, double e, double g, const std::string& m) {
  for (const auto& r : rows) {
    if (std::abs(r.e - e) < 1e-12 && std::abs(r.gamma - g) < 1e-12 && r.method == m) return r;
  }
  throw std::runtime_error("missing aggregate row");
}

// 5. benchmark grid at p = 20, 50 replicates per cell.
Outcome figure_two_desk_scale() {
  GridConfig cfg;
  cfg.replicates = 50;
  cfg.methods = {method_by_name("gr-alasso"), method_by_name("alasso")};
  cfg.seed0 = 505;
  const auto rows = aggregate(run_grid(cfg));
  bool a_ok = true;
  double min_tpr = 1.0, max_fpr = 0.0;
  for (double g : cfg.gamma_list) {
    const auto& r = find_row(rows, 0.02, g, "gr-alasso");
    min_tpr = std::min(min_tpr, r.tpr_mean);
    max_fpr = std::max(max_fpr, r.fpr_mean);
    a_ok = a_ok && r.failures == 0 && r.tpr_mean >= 0.98 && r.fpr_mean <= 0.15;
  }
  const double b_tpr = find_row(rows, 0.10, 10, "gr-alasso").tpr_mean;
  const bool b_ok = std::abs(b_tpr - 0.95) <= 0.05;
  const double gr = find_row(rows, 0.05, 10, "gr-alasso").tpr_mean;
  const double al = find_row(rows, 0.05, 10, "alasso").tpr_mean;
  const bool c_ok = gr - al >= 0.10;
  std::ostringstream detail;
  detail << "(a) e=0.02 min TPR " << fmt("%.3f", min_tpr) << " max FPR " << fmt("%.3f", max_fpr)
         << (a_ok ? " ok" : " FAILED") << "; (b) e=0.10 g=10 TPR " << fmt("%.3f", b_tpr)
         << (b_ok ? " ok" : " FAILED") << "; (c) e=0.05 g=10 GR " << fmt("%.3f", gr) << " vs ALasso "
         << fmt("%.3f", al) << (c_ok ? " ok" : " FAILED");
  return {a_ok && b_ok && c_ok, detail.str()};
}

// 6. high-dimensional smoke: p = 200, n = 100, ridge weights.
Outcome figure_three_smoke() {
  GridConfig cfg;
  cfg.design.p = 200;
  cfg.e_list = {0.05};
  cfg.gamma_list = {6};
  cfg.replicates = 20;
  MethodSpec m = method_by_name("gr-alasso");
  m.options.weights = WeightMode::ridge;
  cfg.methods = {m};
  cfg.seed0 = 606;
  const auto records = run_grid(cfg);
  std::size_t bad = 0;
  for (const auto& r : records) bad += r.status != "ok";
  const auto row = aggregate(records).front();
  return {bad == 0 && row.tpr_mean >= 0.90,
          "mean TPR " + fmt("%.3f", row.tpr_mean) + " (>= 0.90), FPR " + fmt("%.3f", row.fpr_mean) +
              ", non-ok fits " + std::to_string(bad)};
}

double recovery_rate(std::size_t n) {
  std::size_t hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    SimDesign d;
    d.n = n;
    d.seed = derive_seed(7000 + n, s);
    const Matrix x = gen_design(d);
    const Vector y = gen_response(x, d.beta(), 1.0, derive_seed(7100 + n, s));
    FitOptions opt;
    opt.seed = s;
    hits += fit_gr_alasso(DataMatrix::from_parts(y, x), opt).support == std::vector<std::size_t>{0, 1, 2, 3, 4};
  }
  return static_cast<double>(hits) / 100.0;
}

// 7. exact support recovery grows with n.
Outcome selection_consistency() {
  const double small = recovery_rate(100), large = recovery_rate(1000);
  return {large >= small && large >= 0.9,
          "P(A-hat = A): n=100 " + fmt("%.2f", small) + ", n=1000 " + fmt("%.2f", large) + " (rising, >= 0.9)"};
}

// 8. invariant suites.
Outcome invariants() {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> n_dist(10, 200), p_dist(2, 50);
  std::normal_distribution<double> normal;
  double min_eig = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = n_dist(rng), p = p_dist(rng);
    Matrix x(n, p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) x(i, j) = normal(rng) + (j ? 0.6 * x(i, j - 1) : 0.0);
    }
    const Vector y = x.col(0) + Vector::NullaryExpr(n, [&](Eigen::Index) { return normal(rng); });
    min_eig = std::min(min_eig, symmetric_eigen(gaussian_rank_corr_matrix(DataMatrix::from_parts(y, x)).entries)
                                    .eigenvalues.minCoeff());
  }
  const bool psd = min_eig >= -1e-10;

  bool monotone = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SimDesign d;
    d.seed = derive_seed(809, s);
    const Matrix x = gen_design(d);
    const Vector y = gen_response(x, d.beta(), 1.0, derive_seed(810, s));
    const Matrix t = x.unaryExpr([](double v) { return std::exp(v) + v * v * v; });
    monotone = monotone && fit_gr_alasso(DataMatrix::from_parts(y, x)).path.supports ==
                               fit_gr_alasso(DataMatrix::from_parts(y, t)).path.supports;
  }

  double worst_sqrt = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    SimDesign d;
    d.p = 5 + s % 30;
    d.seed = derive_seed(811, s);
    const Matrix x = gen_design(d);
    const Vector y = gen_response(x, d.beta(), 1.0, derive_seed(812, s));
    const DataMatrix z = DataMatrix::from_parts(y, x);
    std::vector<RobustSummary> sums;
    for (std::size_t j = 0; j < z.names.size(); ++j) sums.push_back(robust_summary(z.column(j)));
    const CovarianceModel m = assemble_covariance(gaussian_rank_corr_matrix(z), sums);
    const double scale = m.sigma.cwiseAbs().maxCoeff();
    worst_sqrt = std::max({worst_sqrt, std::abs(m.sqrt_v.dot(m.sqrt_v) - m.sigma_yy) / scale,
                           (m.sqrt_W.transpose() * m.sqrt_v - m.sigma_xy).cwiseAbs().maxCoeff() / scale,
                           (m.sqrt_W.transpose() * m.sqrt_W - m.sigma_xx).cwiseAbs().maxCoeff() / scale});
  }
  const bool sqrt_ok = worst_sqrt <= 1e-8;

  GridConfig cfg;
  cfg.e_list = {0.05};
  cfg.gamma_list = {10};
  cfg.replicates = 10;
  cfg.methods = {method_by_name("gr-alasso"), method_by_name("lasso")};
  cfg.seed0 = 813;
  auto render = [&](std::size_t threads) {
    cfg.threads = threads;
    std::ostringstream out;
    const auto records = run_grid(cfg);
    write_records_csv(out, records);
    write_aggregate_csv(out, aggregate(records));
    return out.str();
  };
  const bool deterministic = render(1) == render(1) && render(1) == render(2);

  std::ostringstream detail;
  detail << "min GR eigenvalue " << fmt("%.3g", min_eig) << (psd ? " ok" : " FAILED") << "; monotone supports"
         << (monotone ? " ok" : " FAILED") << "; sqrt identities " << fmt("%.3g", worst_sqrt)
         << (sqrt_ok ? " ok" : " FAILED") << "; byte-identical reruns" << (deterministic ? " ok" : " FAILED");
  return {psd && monotone && sqrt_ok && deterministic, detail.str()};
}

// 9. redundant-predictor protocol on a synthetic stand-in with Boston's shape
// (n = 506, 13 predictors, 5 active).
Outcome protocol_stability() {
  SimDesign d;
  d.n = 506;
  d.p = 13;
  d.beta_true = active_beta(13);
  d.seed = 909;
  const Matrix x = gen_design(d);
  const Vector y = gen_response(x, d.beta_true, 1.0, 910);
  RedundantProtocol proto;
  proto.replicates = 200;
  proto.seed = 911;
  const SelectionRates rates = run_redundant_protocol(DataMatrix::from_parts(y, x), proto);
  double worst = 0.0;
  std::string worst_name;
  for (std::size_t j = 0; j < rates.names.size(); ++j) {
    const double gap = std::abs(rates.clean[j] - rates.contaminated[j]);
    if (gap > worst) {
      worst = gap;
      worst_name = rates.names[j];
    }
  }
  return {worst <= 0.10 && rates.failures == 0,
          "max |clean - contaminated| rate = " + fmt("%.3f", worst) + (worst_name.empty() ? "" : " (" + worst_name + ")") +
              "; FPR clean " + fmt("%.3f", rates.fpr_clean) + ", contaminated " + fmt("%.3f", rates.fpr_contaminated) +
              "; failures " + std::to_string(rates.failures)};
}

}  // namespace

int main() {
  std::printf("gralasso %s acceptance suite\n", kVersion);
  criterion(1, "OLS equivalence (pearson, lambda=0, p=5, n=100)", 1, ols_equivalence);
  criterion(2, "lasso solver vs grid oracle + KKT (50 instances)", 30, solver_correctness);
  criterion(3, "estimator consistency (GR rho=0.5 n=1e4; Qn n=1e5)", 30, estimator_consistency);
  criterion(4, "row propagation e=0.05 p=20 (500 replicates)", 10, propagation);
  criterion(5, "benchmark grid p=20 n=100 (50 replicates/cell)", 900, figure_two_desk_scale);
  criterion(6, "high-dimensional smoke p=200 n=100 e=0.05 gamma=6", 1200, figure_three_smoke);
  criterion(7, "support recovery n=100 -> n=1000 (100 seeds)", 600, selection_consistency);
  criterion(8, "invariant suites", 300, invariants);
  criterion(9, "redundant-predictor protocol, synthetic stand-in", 600, protocol_stability);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

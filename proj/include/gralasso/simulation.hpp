#pragma once
// Synthetic designs, cellwise contamination, selection metrics and the
// (contamination rate x outlier magnitude) benchmark grid.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "gralasso/common.hpp"
#include "gralasso/data.hpp"
#include "gralasso/regression.hpp"
#include "gralasso/robust_stats.hpp"

namespace gralasso {

struct SimDesign {
  std::size_t n = 100;
  std::size_t p = 20;
  Vector beta_true;  // empty: five ones followed by zeros
  double ar1_rho = 0.5;
  double noise_sd = 1.0;
  std::uint64_t seed = 1;

  Vector beta() const {
    if (beta_true.size() > 0) return beta_true;
    Vector b = Vector::Zero(static_cast<Eigen::Index>(p));
    b.head(std::min<Eigen::Index>(5, b.size())).setOnes();
    return b;
  }
};

struct ContaminationSpec {
  double rate = 0.0;
  double magnitude = 0.0;
};

using CellMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct ContaminatedData {
  Matrix X;
  CellMask mask;
};

struct SelectionMetrics {
  double tpr = 0.0;
  double fpr = 0.0;
  double mse_beta = 0.0;
  double mspe = 0.0;
};

struct BenchmarkRecord {
  double e = 0.0;
  double gamma = 0.0;
  std::size_t replicate = 0;
  std::string method;
  double tpr = std::nan("");
  double fpr = std::nan("");
  double mse_beta = std::nan("");
  double mspe = std::nan("");
  double runtime_ms = 0.0;
  std::string status = "ok";
};

struct AggregateRow {
  double e = 0.0;
  double gamma = 0.0;
  std::string method;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  double tpr_mean = 0.0, tpr_se = 0.0;
  double fpr_mean = 0.0, fpr_se = 0.0;
  double mse_beta_mean = 0.0, mse_beta_se = 0.0;
  double mspe_mean = 0.0, mspe_se = 0.0;
};

inline Matrix ar1_covariance(std::size_t p, double rho) {
  Matrix s(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) s(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  }
  return s;
}

/// n rows drawn from N(0, Sigma) with Sigma_ij = rho^|i-j|, via the Cholesky factor.
inline Matrix gen_design(const SimDesign& d) {
  if (d.n < 1 || d.p < 1) fail("simulation", "design needs n >= 1 and p >= 1");
  if (!(std::abs(d.ar1_rho) < 1.0)) fail("simulation", "AR(1) correlation must lie in (-1, 1)");
  const Eigen::LLT<Matrix> llt(ar1_covariance(d.p, d.ar1_rho));
  if (llt.info() != Eigen::Success) fail("simulation", "Cholesky factorisation failed");
  std::mt19937_64 rng(d.seed);
  std::normal_distribution<double> normal;
  Matrix e(static_cast<Eigen::Index>(d.n), static_cast<Eigen::Index>(d.p));
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) e(i, j) = normal(rng);
  }
  return e * llt.matrixU();
}

inline Vector gen_response(const Matrix& X, const Vector& beta, double noise_sd, std::uint64_t seed) {
  if (X.cols() != beta.size()) fail("simulation", "design and coefficient dimensions differ");
  if (noise_sd < 0.0) fail("simulation", "noise sd must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector y = X * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += noise_sd * normal(rng);
  return y;
}

/// Each cell independently replaced with probability `rate` by a draw from
/// N(+gamma, 1) or N(-gamma, 1), sign chosen by a fair coin.
inline ContaminatedData contaminate_cells(const Matrix& X, const ContaminationSpec& spec, std::uint64_t seed) {
  if (!(spec.rate >= 0.0 && spec.rate < 1.0)) fail("simulation", "contamination rate must lie in [0, 1)");
  ContaminatedData out{X, CellMask::Constant(X.rows(), X.cols(), false)};
  if (spec.rate == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (unif(rng) < spec.rate) {
        const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
        out.X(i, j) = sign * spec.magnitude + normal(rng);
        out.mask(i, j) = true;
      }
    }
  }
  return out;
}

/// Fraction of rows carrying at least one flagged cell.
inline double contaminated_row_fraction(const CellMask& mask) {
  if (mask.rows() == 0) return 0.0;
  return static_cast<double>(mask.rowwise().any().count()) / static_cast<double>(mask.rows());
}

inline SelectionMetrics compute_metrics(const std::vector<std::size_t>& support, const Vector& beta_hat,
                                        double intercept, const Vector& beta_true, const Matrix& X_test,
                                        const Vector& y_test) {
  const auto p = static_cast<std::size_t>(beta_true.size());
  if (beta_hat.size() != beta_true.size() || X_test.cols() != beta_true.size() || X_test.rows() != y_test.size()) {
    fail("simulation", "dimension mismatch in metrics");
  }
  std::size_t active = 0, tp = 0, fp = 0;
  std::vector<bool> selected(p, false);
  for (std::size_t j : support) selected.at(j) = true;
  for (std::size_t j = 0; j < p; ++j) {
    const bool truly = beta_true(static_cast<Eigen::Index>(j)) != 0.0;
    active += truly;
    tp += truly && selected[j];
    fp += !truly && selected[j];
  }
  if (active == 0) fail("simulation", "empty active set");
  SelectionMetrics m;
  m.tpr = static_cast<double>(tp) / static_cast<double>(active);
  m.fpr = active == p ? 0.0 : static_cast<double>(fp) / static_cast<double>(p - active);
  m.mse_beta = (beta_hat - beta_true).squaredNorm() / static_cast<double>(p);
  const Vector pred = (X_test * beta_hat).array() + intercept;
  m.mspe = (pred - y_test).squaredNorm() / static_cast<double>(y_test.size());
  return m;
}

// ---------------------------------------------------------------------------
// Benchmark grid

struct MethodSpec {
  std::string name;
  FitOptions options;
};

/// In-process methods: gr-alasso, alasso (Pearson plug-in, OLS/ridge weights), lasso (Pearson, unit weights).
inline MethodSpec method_by_name(const std::string& name) {
  if (name == "gr-alasso") return {name, FitOptions{}};
  if (name == "alasso") return {name, FitOptions::alasso()};
  if (name == "lasso") return {name, FitOptions::lasso()};
  fail("simulation", "unknown method '" + name + "'");
}

struct GridConfig {
  SimDesign design;
  std::vector<double> e_list{0.02, 0.05, 0.10};
  std::vector<double> gamma_list{2, 4, 6, 8, 10};
  std::size_t replicates = 200;
  std::vector<MethodSpec> methods{method_by_name("gr-alasso")};
  std::uint64_t seed0 = 1;
  std::size_t threads = 1;
  bool timing = false;          // runtime_ms stays 0 unless enabled, keeping output byte-stable
  bool contaminated_test = false;
};

/// Stable per-replicate seed: adding grid cells never perturbs existing ones.
inline std::uint64_t replicate_seed(std::uint64_t seed0, double e, double gamma, std::size_t replicate) {
  const auto ek = static_cast<std::uint64_t>(std::llround(e * 1000.0));
  const auto gk = static_cast<std::uint64_t>(std::llround(gamma * 10.0));
  std::uint64_t h = mix64(ek);
  h = mix64(h ^ (gk + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(replicate) + 0xD1B54A32D192ED03ULL));
  return seed0 + h;
}

namespace detail {

inline std::string sanitize_status(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace detail

/// One replicate of one grid cell for every method: fresh design, response,
/// contamination and a clean independent test set of the same size.
inline std::vector<BenchmarkRecord> run_replicate(const GridConfig& cfg, double e, double gamma,
                                                  std::size_t replicate) {
  const std::uint64_t base = replicate_seed(cfg.seed0, e, gamma, replicate);
  SimDesign d = cfg.design;
  const Vector beta = d.beta();
  d.seed = derive_seed(base, 1);
  const Matrix X = gen_design(d);
  const Vector y = gen_response(X, beta, d.noise_sd, derive_seed(base, 2));
  const ContaminatedData train = contaminate_cells(X, {e, gamma}, derive_seed(base, 3));
  d.seed = derive_seed(base, 4);
  Matrix X_test = gen_design(d);
  const Vector y_test = gen_response(X_test, beta, d.noise_sd, derive_seed(base, 5));
  if (cfg.contaminated_test) X_test = contaminate_cells(X_test, {e, gamma}, derive_seed(base, 6)).X;
  const DataMatrix data = DataMatrix::from_parts(y, train.X);

  std::vector<BenchmarkRecord> out;
  for (const MethodSpec& m : cfg.methods) {
    BenchmarkRecord r{e, gamma, replicate, m.name};
    const auto start = std::chrono::steady_clock::now();
    try {
      FitOptions opt = m.options;
      opt.seed = derive_seed(base, 7);
      const SelectionFit fit = fit_gr_alasso(data, opt);
      const SelectionMetrics met = compute_metrics(fit.support, fit.beta, fit.intercept, beta, X_test, y_test);
      r.tpr = met.tpr;
      r.fpr = met.fpr;
      r.mse_beta = met.mse_beta;
      r.mspe = met.mspe;
      if (!fit.converged) r.status = "ok-nonconverged";
    } catch (const std::exception& ex) {
      r.status = "failed: " + detail::sanitize_status(ex.what());
    }
    if (cfg.timing) {
      r.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline bool record_succeeded(const BenchmarkRecord& r) { return r.status.rfind("ok", 0) == 0; }

/// Records sorted by (e, gamma, replicate, method order); independent of thread count.
inline std::vector<BenchmarkRecord> run_grid(const GridConfig& cfg) {
  if (cfg.methods.empty()) fail("simulation", "no methods requested");
  std::vector<std::tuple<double, double, std::size_t>> cells;
  for (double e : cfg.e_list) {
    for (double g : cfg.gamma_list) {
      for (std::size_t r = 0; r < cfg.replicates; ++r) cells.emplace_back(e, g, r);
    }
  }
  std::vector<std::vector<BenchmarkRecord>> results(cells.size());
  detail::parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    const auto& [e, g, r] = cells[i];
    results[i] = run_replicate(cfg, e, g, r);
  });
  std::vector<BenchmarkRecord> out;
  for (auto& rs : results) {
    for (auto& r : rs) out.push_back(std::move(r));
  }
  return out;
}

/// Per (e, gamma, method) means and standard errors over successful replicates.
inline std::vector<AggregateRow> aggregate(const std::vector<BenchmarkRecord>& records) {
  std::map<std::tuple<double, double, std::string>, std::vector<const BenchmarkRecord*>> groups;
  for (const auto& r : records) groups[{r.e, r.gamma, r.method}].push_back(&r);
  std::vector<AggregateRow> out;
  for (auto& [key, rs] : groups) {
    std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->replicate < b->replicate; });
    AggregateRow row;
    std::tie(row.e, row.gamma, row.method) = key;
    row.replicates = rs.size();
    std::vector<const BenchmarkRecord*> ok;
    for (auto* r : rs) {
      if (record_succeeded(*r)) ok.push_back(r);
    }
    row.failures = rs.size() - ok.size();
    auto stats = [&](double BenchmarkRecord::*field, double& mean, double& se) {
      mean = se = std::nan("");
      if (ok.empty()) return;
      double s = 0.0;
      for (auto* r : ok) s += r->*field;
      mean = s / static_cast<double>(ok.size());
      if (ok.size() < 2) {
        se = 0.0;
        return;
      }
      double ss = 0.0;
      for (auto* r : ok) ss += (r->*field - mean) * (r->*field - mean);
      se = std::sqrt(ss / static_cast<double>(ok.size() - 1) / static_cast<double>(ok.size()));
    };
    stats(&BenchmarkRecord::tpr, row.tpr_mean, row.tpr_se);
    stats(&BenchmarkRecord::fpr, row.fpr_mean, row.fpr_se);
    stats(&BenchmarkRecord::mse_beta, row.mse_beta_mean, row.mse_beta_se);
    stats(&BenchmarkRecord::mspe, row.mspe_mean, row.mspe_se);
    out.push_back(row);
  }
  return out;
}

inline constexpr const char* kRecordHeader = "e,gamma,replicate,method,tpr,fpr,mse_beta,mspe,runtime_ms,status";
inline constexpr const char* kAggregateHeader =
    "e,gamma,method,replicates,failures,tpr_mean,tpr_se,fpr_mean,fpr_se,mse_beta_mean,mse_beta_se,mspe_mean,"
    "mspe_se";

inline void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.e) << ',' << format_double(r.gamma) << ',' << r.replicate << ',' << r.method << ','
        << format_double(r.tpr) << ',' << format_double(r.fpr) << ',' << format_double(r.mse_beta) << ','
        << format_double(r.mspe) << ',' << format_double(r.runtime_ms) << ',' << r.status << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateHeader << '\n';
  for (const auto& a : rows) {
    out << format_double(a.e) << ',' << format_double(a.gamma) << ',' << a.method << ',' << a.replicates << ','
        << a.failures << ',' << format_double(a.tpr_mean) << ',' << format_double(a.tpr_se) << ','
        << format_double(a.fpr_mean) << ',' << format_double(a.fpr_se) << ',' << format_double(a.mse_beta_mean)
        << ',' << format_double(a.mse_beta_se) << ',' << format_double(a.mspe_mean) << ','
        << format_double(a.mspe_se) << '\n';
  }
}

/// Parses the record schema; used to ingest results of external methods.
inline std::vector<BenchmarkRecord> read_records_csv(std::istream& in) {
  std::vector<BenchmarkRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto number = [&](std::string_view s, std::size_t col) {
    double v = 0.0;
    if (s == "nan" || s == "NaN" || s == "NA" || s.empty()) return std::nan("");
    if (!detail::parse_double(s, v)) throw DataError("non-numeric field '" + std::string(s) + "'", line_no, col);
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!header_seen) {
      if (view != kRecordHeader) throw DataError("unexpected record header", line_no, 1);
      header_seen = true;
      continue;
    }
    const auto f = detail::split_csv_line(view);
    if (f.size() != 10) throw DataError("expected 10 fields", line_no, f.size());
    BenchmarkRecord r;
    r.e = number(f[0], 1);
    r.gamma = number(f[1], 2);
    r.replicate = static_cast<std::size_t>(number(f[2], 3));
    r.method = std::string(f[3]);
    r.tpr = number(f[4], 5);
    r.fpr = number(f[5], 6);
    r.mse_beta = number(f[6], 7);
    r.mspe = number(f[7], 8);
    r.runtime_ms = number(f[8], 9);
    r.status = std::string(f[9]);
    out.push_back(std::move(r));
  }
  if (!header_seen) throw DataError("record file has no header");
  return out;
}

// ---------------------------------------------------------------------------
// Redundant-predictor stability protocol for a user-supplied dataset

struct RedundantProtocol {
  std::size_t redundant = 10;
  double rho = 0.5;
  ContaminationSpec contamination{0.05, 10.0};
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
};

struct SelectionRates {
  std::vector<std::string> names;  // original predictors, then the redundant ones
  std::vector<double> clean;
  std::vector<double> contaminated;
  double fpr_clean = 0.0;
  double fpr_contaminated = 0.0;
  std::size_t failures = 0;
};

/// Predictors are standardised by median/Qn, `redundant` N(0, AR(rho)) noise
/// predictors are appended, and each replicate is fitted once clean and once
/// with every predictor cellwise contaminated. Returns per-variable selection rates.
inline SelectionRates run_redundant_protocol(const DataMatrix& data, const RedundantProtocol& proto,
                                             const FitOptions& options = {}) {
  const std::size_t p0 = data.p();
  const std::size_t n = data.n();
  Matrix base = data.predictors();
  for (Eigen::Index j = 0; j < base.cols(); ++j) {
    const RobustSummary s = robust_summary(data.column(static_cast<std::size_t>(j) + 1));
    if (!(s.scale > 0.0)) fail("simulation", "zero robust scale for '" + data.names[static_cast<std::size_t>(j) + 1] + "'");
    base.col(j) = (base.col(j).array() - s.location) / s.scale;
  }
  const Vector y = data.response();

  SelectionRates rates;
  std::vector<std::string> names = data.names;
  for (std::size_t k = 0; k < proto.redundant; ++k) names.push_back("redundant" + std::to_string(k + 1));
  rates.names.assign(names.begin() + 1, names.end());
  const std::size_t p = p0 + proto.redundant;
  rates.clean.assign(p, 0.0);
  rates.contaminated.assign(p, 0.0);
  std::size_t ok_clean = 0, ok_cont = 0;

  for (std::size_t r = 0; r < proto.replicates; ++r) {
    const std::uint64_t base_seed = derive_seed(proto.seed, r);
    Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    X.leftCols(static_cast<Eigen::Index>(p0)) = base;
    if (proto.redundant > 0) {
      SimDesign d{n, proto.redundant, {}, proto.rho, 1.0, derive_seed(base_seed, 1)};
      X.rightCols(static_cast<Eigen::Index>(proto.redundant)) = gen_design(d);
    }
    FitOptions opt = options;
    opt.seed = derive_seed(base_seed, 2);
    auto tally = [&](const Matrix& Xr, std::vector<double>& counts, std::size_t& ok) {
      try {
        const SelectionFit fit = fit_gr_alasso(DataMatrix::from_parts(y, Xr, names), opt);
        for (std::size_t j : fit.support) counts[j] += 1.0;
        ++ok;
      } catch (const Error&) {
        ++rates.failures;
      }
    };
    tally(X, rates.clean, ok_clean);
    tally(contaminate_cells(X, proto.contamination, derive_seed(base_seed, 3)).X, rates.contaminated, ok_cont);
  }
  for (double& v : rates.clean) v = ok_clean ? v / static_cast<double>(ok_clean) : std::nan("");
  for (double& v : rates.contaminated) v = ok_cont ? v / static_cast<double>(ok_cont) : std::nan("");
  auto mean_redundant = [&](const std::vector<double>& v) {
    if (proto.redundant == 0) return 0.0;
    double s = 0.0;
    for (std::size_t j = p0; j < p; ++j) s += v[j];
    return s / static_cast<double>(proto.redundant);
  };
  rates.fpr_clean = mean_redundant(rates.clean);
  rates.fpr_contaminated = mean_redundant(rates.contaminated);
  return rates;
}

}  // namespace gralasso

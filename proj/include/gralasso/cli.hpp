#pragma once
// Subcommand implementations behind the gralasso executable. Each run_* takes a
// RunConfig, writes its outputs under config.output_dir and returns an exit code:
// 0 success, 2 usage or data error, 3 degraded benchmark.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gralasso/common.hpp"
#include "gralasso/covariance.hpp"
#include "gralasso/data.hpp"
#include "gralasso/regression.hpp"
#include "gralasso/simulation.hpp"

namespace gralasso::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kDataError = 2, kDegraded = 3 };

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output_dir = ".";
  std::string response = "y";
  std::string estimator = "gr";
  std::string weights = "auto";
  std::string kappa = "0.1";  // a number, or "auto" to pick it by pseudo-data CV
  std::size_t folds = 5;
  std::size_t n_lambda = 100;
  std::optional<double> lambda_ratio;
  std::optional<double> lambda;
  std::string rule = "1se";
  std::size_t screen_k = 100;
  std::size_t n = 100;
  std::size_t p = 20;
  std::vector<double> e_list{0.02, 0.05, 0.10};
  std::vector<double> gamma_list{2, 4, 6, 8, 10};
  std::size_t replicates = 200;
  std::vector<std::string> methods{"gr-alasso", "alasso", "lasso"};
  std::vector<std::string> external;
  std::size_t redundant = 10;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool timing = false;
  bool export_matrices = false;
};

struct FitReport {
  std::vector<std::string> names;  // predictors
  std::vector<double> coefficients;
  std::vector<std::string> selected;
  double intercept = 0.0;
  double lambda = 0.0;
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
  std::string rule;
  std::vector<double> cv_lambda;
  std::vector<double> cv_mean;
  std::vector<double> cv_se;
  std::vector<std::string> summary_names;  // response first
  std::vector<double> locations;
  std::vector<double> scales;
  std::string estimator;
  std::string weights;
  double kappa = 0.0;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  std::size_t n = 0;
  std::string version = kVersion;
  bool converged = true;

  bool operator==(const FitReport&) const = default;
};

inline void to_json(nlohmann::json& j, const FitReport& r) {
  j = nlohmann::json{{"software", "gralasso"},
                     {"version", r.version},
                     {"seed", r.seed},
                     {"estimator", r.estimator},
                     {"weights", r.weights},
                     {"kappa", r.kappa},
                     {"folds", r.folds},
                     {"n", r.n},
                     {"rule", r.rule},
                     {"converged", r.converged},
                     {"predictors", r.names},
                     {"coefficients", r.coefficients},
                     {"selected", r.selected},
                     {"intercept", r.intercept},
                     {"lambda", r.lambda},
                     {"lambda_min", r.lambda_min},
                     {"lambda_1se", r.lambda_1se},
                     {"cv", {{"lambda", r.cv_lambda}, {"mean_error", r.cv_mean}, {"std_error", r.cv_se}}},
                     {"summaries", {{"names", r.summary_names}, {"location", r.locations}, {"scale", r.scales}}}};
}

inline void from_json(const nlohmann::json& j, FitReport& r) {
  j.at("version").get_to(r.version);
  j.at("seed").get_to(r.seed);
  j.at("estimator").get_to(r.estimator);
  j.at("weights").get_to(r.weights);
  j.at("kappa").get_to(r.kappa);
  j.at("folds").get_to(r.folds);
  j.at("n").get_to(r.n);
  j.at("rule").get_to(r.rule);
  j.at("converged").get_to(r.converged);
  j.at("predictors").get_to(r.names);
  j.at("coefficients").get_to(r.coefficients);
  j.at("selected").get_to(r.selected);
  j.at("intercept").get_to(r.intercept);
  j.at("lambda").get_to(r.lambda);
  j.at("lambda_min").get_to(r.lambda_min);
  j.at("lambda_1se").get_to(r.lambda_1se);
  j.at("cv").at("lambda").get_to(r.cv_lambda);
  j.at("cv").at("mean_error").get_to(r.cv_mean);
  j.at("cv").at("std_error").get_to(r.cv_se);
  j.at("summaries").at("names").get_to(r.summary_names);
  j.at("summaries").at("location").get_to(r.locations);
  j.at("summaries").at("scale").get_to(r.scales);
}

inline FitOptions fit_options(const RunConfig& c) {
  FitOptions o;
  o.estimator = parse_estimator(c.estimator);
  if (c.weights == "auto") {
    o.weights = WeightMode::automatic;
  } else if (c.weights == "direct") {
    o.weights = WeightMode::direct;
  } else if (c.weights == "ridge") {
    o.weights = WeightMode::ridge;
  } else if (c.weights == "unit") {
    o.weights = WeightMode::unit;
  } else {
    fail("cli", "unknown weights '" + c.weights + "'");
  }
  if (c.kappa == "auto") {
    o.select_kappa = true;
  } else {
    double k = 0.0;
    if (!detail::parse_double(c.kappa, k)) fail("cli", "kappa must be a number or 'auto'");
    o.kappa = k;
  }
  if (c.rule == "min") {
    o.rule = SelectionRule::min;
  } else if (c.rule != "1se") {
    fail("cli", "unknown rule '" + c.rule + "'");
  }
  o.folds = c.folds;
  o.n_lambda = c.n_lambda;
  o.lambda_ratio = c.lambda_ratio;
  o.lambda = c.lambda;
  o.seed = c.seed;
  return o;
}

inline FitReport make_report(const DataMatrix& data, const SelectionFit& fit, const RunConfig& c) {
  FitReport r;
  r.names.assign(data.names.begin() + 1, data.names.end());
  r.coefficients.assign(fit.beta.data(), fit.beta.data() + fit.beta.size());
  for (std::size_t j : fit.support) r.selected.push_back(r.names[j]);
  r.intercept = fit.intercept;
  r.lambda = fit.lambda;
  r.lambda_min = fit.lambda_min;
  r.lambda_1se = fit.lambda_1se;
  r.rule = c.lambda ? "fixed" : c.rule;
  if (fit.cross_validated) {
    r.cv_lambda = fit.path.lambdas;
    r.cv_mean = fit.cv.mean_error;
    r.cv_se = fit.cv.std_error;
  }
  r.summary_names = data.names;
  for (const auto& s : fit.summaries) {
    r.locations.push_back(s.location);
    r.scales.push_back(s.scale);
  }
  r.estimator = std::string(to_string(fit.correlation.estimator));
  r.weights = std::string(to_string(fit.weights.source));
  r.kappa = fit.weights.kappa;
  r.seed = c.seed;
  r.folds = fit.cross_validated ? c.folds : 0;
  r.n = data.n();
  r.converged = fit.converged;
  return r;
}

inline void write_report_text(std::ostream& out, const FitReport& r) {
  out << "gralasso " << r.version << " fit report\n";
  out << "estimator: " << r.estimator << "\nweights: " << r.weights;
  if (r.weights == "ridge") out << " (kappa " << format_double(r.kappa) << ")";
  out << "\nseed: " << r.seed << "\nobservations: " << r.n << "\nfolds: " << r.folds << "\nrule: " << r.rule
      << "\nlambda: " << format_double(r.lambda) << "\nlambda_min: " << format_double(r.lambda_min)
      << "\nlambda_1se: " << format_double(r.lambda_1se) << "\nconverged: " << (r.converged ? "yes" : "no")
      << "\n\nselected (" << r.selected.size() << "):";
  for (const auto& s : r.selected) out << ' ' << s;
  out << "\nintercept: " << format_double(r.intercept) << "\n\ncoefficients:\n";
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    out << "  " << r.names[j] << " " << format_double(r.coefficients[j]) << '\n';
  }
  out << "\nrobust summaries (location, scale):\n";
  for (std::size_t j = 0; j < r.summary_names.size(); ++j) {
    out << "  " << r.summary_names[j] << " " << format_double(r.locations[j]) << " " << format_double(r.scales[j])
        << '\n';
  }
}

namespace detail {

inline std::ofstream open_output(const RunConfig& c, const std::string& file) {
  std::filesystem::create_directories(c.output_dir);
  std::ofstream out(std::filesystem::path(c.output_dir) / file);
  if (!out) fail("cli", "cannot write '" + file + "' in '" + c.output_dir + "'");
  return out;
}

inline void write_metadata(std::ostream& out, const RunConfig& c) {
  out << "# gralasso " << kVersion << " " << c.subcommand << "\n# seed: " << c.seed << '\n';
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace detail

inline int run_fit(const RunConfig& c) {
  return detail::guarded([&] {
    const DataMatrix data = read_data_csv(c.input, c.response);
    const SelectionFit fit = fit_gr_alasso(data, fit_options(c));
    const FitReport report = make_report(data, fit, c);

    auto text = detail::open_output(c, "report.txt");
    write_report_text(text, report);
    auto json = detail::open_output(c, "report.json");
    json << nlohmann::json(report).dump(2) << '\n';

    auto coef = detail::open_output(c, "coefficients.csv");
    coef << "name,coefficient,standardized,weight,selected\n";
    coef << "(intercept)," << format_double(fit.intercept) << ",0,0,1\n";
    for (std::size_t j = 0; j < report.names.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      coef << report.names[j] << ',' << format_double(fit.beta(jj)) << ','
           << format_double(fit.beta_standardized(jj)) << ',' << format_double(fit.weights.values(jj)) << ','
           << (fit.beta_standardized(jj) != 0.0 ? 1 : 0) << '\n';
    }
    if (fit.cross_validated) {
      auto cv = detail::open_output(c, "cv.csv");
      cv << "lambda,mean_error,std_error,support_size\n";
      for (std::size_t k = 0; k < fit.path.lambdas.size(); ++k) {
        cv << format_double(fit.path.lambdas[k]) << ',' << format_double(fit.cv.mean_error[k]) << ','
           << format_double(fit.cv.std_error[k]) << ',' << fit.path.supports[k].size() << '\n';
      }
      for (const auto& w : fit.cv.warnings) std::cerr << "warning: " << w << '\n';
    }
    if (c.export_matrices) {
      auto corr = detail::open_output(c, "correlation.csv");
      write_matrix_csv(corr, data.names, fit.correlation.entries);
      const CovarianceModel cov = assemble_covariance(fit.correlation, fit.summaries, data.names);
      auto sig = detail::open_output(c, "covariance.csv");
      write_matrix_csv(sig, data.names, cov.sigma);
    }
    std::cout << "selected:";
    for (const auto& s : report.selected) std::cout << ' ' << s;
    std::cout << '\n';
    return static_cast<int>(kOk);
  });
}

inline int run_screen(const RunConfig& c) {
  return detail::guarded([&] {
    const DataMatrix data = read_data_csv(c.input, c.response);
    const std::size_t k = std::min(c.screen_k, data.p());
    const auto top = screen_top_k(data, k);
    auto out = detail::open_output(c, "screen.csv");
    out << "rank,name,gr_correlation\n";
    for (std::size_t r = 0; r < top.size(); ++r) {
      out << r + 1 << ',' << data.names[top[r].index + 1] << ',' << format_double(top[r].correlation) << '\n';
    }
    auto subset = detail::open_output(c, "screened.csv");
    std::vector<std::size_t> keep;
    for (const auto& s : top) keep.push_back(s.index);
    write_data_csv(subset, data.select_predictors(keep));
    return static_cast<int>(kOk);
  });
}

inline int run_simulate(const RunConfig& c) {
  return detail::guarded([&] {
    if (c.e_list.empty() || c.gamma_list.empty()) fail("cli", "need a contamination rate and magnitude");
    SimDesign d;
    d.n = c.n;
    d.p = c.p;
    if (d.n < 2 || d.p < 1) fail("cli", "invalid design: need n >= 2 and p >= 1");
    const ContaminationSpec spec{c.e_list.front(), c.gamma_list.front()};
    if (!(spec.rate >= 0.0 && spec.rate < 1.0) || spec.magnitude < 0.0) fail("cli", "invalid contamination");
    const Vector beta = d.beta();
    d.seed = derive_seed(c.seed, 1);
    const Matrix X = gen_design(d);
    const Vector y = gen_response(X, beta, d.noise_sd, derive_seed(c.seed, 2));
    const ContaminatedData train = contaminate_cells(X, spec, derive_seed(c.seed, 3));
    d.seed = derive_seed(c.seed, 4);
    const Matrix X_test = gen_design(d);
    const Vector y_test = gen_response(X_test, beta, d.noise_sd, derive_seed(c.seed, 5));

    const DataMatrix train_data = DataMatrix::from_parts(y, train.X);
    auto tr = detail::open_output(c, "train.csv");
    write_data_csv(tr, train_data);
    auto te = detail::open_output(c, "test.csv");
    write_data_csv(te, DataMatrix::from_parts(y_test, X_test));
    // one "row,column" line per contaminated cell; row is 0-based, column is the predictor name
    auto mask = detail::open_output(c, "mask.csv");
    for (Eigen::Index i = 0; i < train.mask.rows(); ++i) {
      for (Eigen::Index j = 0; j < train.mask.cols(); ++j) {
        if (train.mask(i, j)) mask << i << ',' << train_data.names[static_cast<std::size_t>(j) + 1] << '\n';
      }
    }
    std::vector<std::string> active;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      if (beta(j) != 0.0) active.push_back(train_data.names[static_cast<std::size_t>(j) + 1]);
    }
    nlohmann::json truth{{"software", "gralasso"},
                         {"version", kVersion},
                         {"seed", c.seed},
                         {"n", d.n},
                         {"p", d.p},
                         {"ar1_rho", d.ar1_rho},
                         {"noise_sd", d.noise_sd},
                         {"e", spec.rate},
                         {"gamma", spec.magnitude},
                         {"beta_true", std::vector<double>(beta.data(), beta.data() + beta.size())},
                         {"active", active},
                         {"test_size", d.n},
                         {"contaminated_cells", train.mask.count()}};
    auto meta = detail::open_output(c, "truth.json");
    meta << truth.dump(2) << '\n';
    return static_cast<int>(kOk);
  });
}

inline int run_benchmark(const RunConfig& c) {
  return detail::guarded([&] {
    GridConfig g;
    g.design.n = c.n;
    g.design.p = c.p;
    g.e_list = c.e_list;
    g.gamma_list = c.gamma_list;
    g.replicates = c.replicates;
    g.seed0 = c.seed;
    g.threads = c.threads;
    g.timing = c.timing;
    g.methods.clear();
    const FitOptions base = fit_options(c);
    for (const auto& m : c.methods) {
      MethodSpec spec = method_by_name(m);
      spec.options.kappa = base.kappa;
      spec.options.select_kappa = base.select_kappa;
      spec.options.folds = base.folds;
      spec.options.n_lambda = base.n_lambda;
      spec.options.lambda_ratio = base.lambda_ratio;
      spec.options.rule = base.rule;
      g.methods.push_back(std::move(spec));
    }
    std::vector<BenchmarkRecord> records = run_grid(g);
    const std::size_t own = records.size();
    std::size_t ok = 0;
    for (const auto& r : records) ok += record_succeeded(r);
    for (const auto& path : c.external) {
      std::ifstream in(path);
      if (!in) throw DataError("cannot open '" + path + "'");
      auto ext = read_records_csv(in);
      records.insert(records.end(), ext.begin(), ext.end());
    }

    auto header = [&](std::ostream& out) {
      detail::write_metadata(out, c);
      out << "# n: " << c.n << "\n# p: " << c.p << "\n# replicates: " << c.replicates
          << "\n# e_list: " << detail::join(c.e_list) << "\n# gamma_list: " << detail::join(c.gamma_list)
          << "\n# test_size: " << c.n << '\n';
    };
    auto rec = detail::open_output(c, "records.csv");
    header(rec);
    write_records_csv(rec, records);
    auto agg = detail::open_output(c, "aggregate.csv");
    header(agg);
    write_aggregate_csv(agg, aggregate(records));

    const double success = own ? static_cast<double>(ok) / static_cast<double>(own) : 1.0;
    if (success < 0.9) {
      std::cerr << "warning: only " << ok << " of " << own << " replicate fits succeeded\n";
      return static_cast<int>(kDegraded);
    }
    return static_cast<int>(kOk);
  });
}

inline int run_protocol(const RunConfig& c) {
  return detail::guarded([&] {
    const DataMatrix data = read_data_csv(c.input, c.response);
    RedundantProtocol proto;
    proto.redundant = c.redundant;
    proto.replicates = c.replicates;
    proto.seed = c.seed;
    if (!c.e_list.empty()) proto.contamination.rate = c.e_list.front();
    if (!c.gamma_list.empty()) proto.contamination.magnitude = c.gamma_list.front();
    const SelectionRates rates = run_redundant_protocol(data, proto, fit_options(c));
    auto out = detail::open_output(c, "selection_rates.csv");
    detail::write_metadata(out, c);
    out << "# e: " << format_double(proto.contamination.rate)
        << "\n# gamma: " << format_double(proto.contamination.magnitude) << "\n# replicates: " << proto.replicates
        << "\n# failures: " << rates.failures << '\n';
    out << "variable,clean,contaminated\n";
    for (std::size_t j = 0; j < rates.names.size(); ++j) {
      out << rates.names[j] << ',' << format_double(rates.clean[j]) << ',' << format_double(rates.contaminated[j])
          << '\n';
    }
    out << "FPR," << format_double(rates.fpr_clean) << ',' << format_double(rates.fpr_contaminated) << '\n';
    return static_cast<int>(kOk);
  });
}

inline int run(const RunConfig& c) {
  if (c.subcommand == "fit") return run_fit(c);
  if (c.subcommand == "screen") return run_screen(c);
  if (c.subcommand == "simulate") return run_simulate(c);
  if (c.subcommand == "benchmark") return run_benchmark(c);
  if (c.subcommand == "protocol") return run_protocol(c);
  std::cerr << "error: unknown subcommand '" << c.subcommand << "'\n";
  return kDataError;
}

}  // namespace gralasso::cli

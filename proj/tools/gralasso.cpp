// gralasso command-line front end.
//
//   gralasso fit       --input data.csv --response y [--estimator gr|spearman|pearson] ...
//   gralasso screen    --input data.csv --response y --screen-k 100
//   gralasso simulate  --n 100 --p 20 --e-list 0.05 --gamma-list 10 --seed 7
//   gralasso benchmark --e-list 0.02,0.05,0.1 --gamma-list 2,4,6,8,10 --replicates 200
//   gralasso protocol  --input boston.csv --response medv --replicates 200
//
// Every flag may also be set through GRALASSO_<FLAG> (upper case, '-' -> '_'); flags win.

#include <string>

#include "CLI11.hpp"

#include "gralasso/cli.hpp"

namespace {

using gralasso::cli::RunConfig;

std::string env_name(const std::string& flag) {
  std::string s = "GRALASSO_";
  for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

template <class T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name));
}

void add_io(CLI::App* app, RunConfig& c, bool needs_input) {
  auto* in = flag(app, "input", c.input, "input CSV with a header row");
  if (needs_input) in->required();
  flag(app, "output-dir", c.output_dir, "directory for outputs")->capture_default_str();
  flag(app, "seed", c.seed, "random seed")->capture_default_str();
}

void add_fit_options(CLI::App* app, RunConfig& c) {
  flag(app, "response", c.response, "response column name")->capture_default_str();
  flag(app, "estimator", c.estimator, "correlation estimator")
      ->check(CLI::IsMember({"gr", "spearman", "pearson"}))
      ->capture_default_str();
  flag(app, "weights", c.weights, "adaptive weight source")
      ->check(CLI::IsMember({"auto", "direct", "ridge", "unit"}))
      ->capture_default_str();
  flag(app, "kappa", c.kappa, "ridge parameter for initial weights, or 'auto'")->capture_default_str();
  flag(app, "folds", c.folds, "cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
  flag(app, "n-lambda", c.n_lambda, "penalty grid size")->check(CLI::Range(2, 100000))->capture_default_str();
  flag(app, "lambda-ratio", c.lambda_ratio, "smallest / largest penalty (default 1e-3 if p < n else 1e-2)");
  flag(app, "lambda", c.lambda, "fit at a fixed penalty instead of cross-validating");
  flag(app, "rule", c.rule, "penalty selection rule")->check(CLI::IsMember({"min", "1se"}))->capture_default_str();
}

void add_grid(CLI::App* app, RunConfig& c) {
  flag(app, "n", c.n, "observations per simulated dataset")->capture_default_str();
  flag(app, "p", c.p, "predictors per simulated dataset")->capture_default_str();
  flag(app, "e-list", c.e_list, "cellwise contamination rates")->delimiter(',');
  flag(app, "gamma-list", c.gamma_list, "outlier magnitudes")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust variable selection under cellwise contamination (gralasso " +
               std::string(gralasso::kVersion) + ")"};
  app.require_subcommand(1);
  RunConfig c;

  auto* fit = app.add_subcommand("fit", "fit the Gaussian-rank adaptive Lasso to a CSV dataset");
  add_io(fit, c, true);
  add_fit_options(fit, c);
  fit->add_flag("--export-matrices", c.export_matrices, "also write correlation.csv and covariance.csv");

  auto* screen = app.add_subcommand("screen", "rank predictors by marginal Gaussian-rank correlation");
  add_io(screen, c, true);
  flag(screen, "response", c.response, "response column name")->capture_default_str();
  flag(screen, "screen-k", c.screen_k, "number of predictors to keep")->check(CLI::PositiveNumber)->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "generate a contaminated training set and a clean test set");
  add_io(simulate, c, false);
  add_grid(simulate, c);

  auto* bench = app.add_subcommand("benchmark", "run the contamination-rate x magnitude benchmark grid");
  add_io(bench, c, false);
  add_fit_options(bench, c);
  add_grid(bench, c);
  flag(bench, "replicates", c.replicates, "replicates per grid cell")->capture_default_str();
  flag(bench, "methods", c.methods, "in-process methods: gr-alasso, alasso, lasso")->delimiter(',');
  flag(bench, "external", c.external, "record CSVs of external methods to merge into the aggregate");
  flag(bench, "threads", c.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_flag("--timing", c.timing, "record wall-clock runtime per fit (output is then not byte-stable)");

  auto* protocol = app.add_subcommand("protocol", "redundant-predictor selection-stability study on a dataset");
  add_io(protocol, c, true);
  add_fit_options(protocol, c);
  flag(protocol, "replicates", c.replicates, "replicates")->capture_default_str();
  flag(protocol, "redundant", c.redundant, "number of appended AR(1) noise predictors")->capture_default_str();
  flag(protocol, "e-list", c.e_list, "contamination rate (first value used)")->delimiter(',');
  flag(protocol, "gamma-list", c.gamma_list, "outlier magnitude (first value used)")->delimiter(',');
  protocol->callback([&] {
    // protocol defaults differ from the benchmark grid
    if (protocol->count("--e-list") == 0) c.e_list = {0.05};
    if (protocol->count("--gamma-list") == 0) c.gamma_list = {10.0};
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gralasso::cli::kDataError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return gralasso::cli::run(c);
}

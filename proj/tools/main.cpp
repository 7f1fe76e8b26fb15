#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

#include "subbag/cli.hpp"
#include "subbag/error.hpp"

namespace {

void add_family_flag(CLI::App* app, subbag::RunConfig& cfg) {
  app->add_option_function<std::string>(
         "--family",
         [&cfg](const std::string& v) {
           if (v == "linear") {
             cfg.family = subbag::Family::Linear;
           } else if (v == "logistic") {
             cfg.family = subbag::Family::Logistic;
           } else {
             throw CLI::ValidationError("--family", "must be 'linear' or 'logistic'");
           }
         },
         "model family: linear or logistic")
      ->required();
}

void add_data_flags(CLI::App* app, subbag::RunConfig& cfg) {
  app->add_option("--data", cfg.csv_path, "input CSV file")->required();
  app->add_option("--response", cfg.response, "response column name")->required();
  app->add_option("--covariates", cfg.covariates,
                  "covariate column names (default: every non-response column)")
      ->delimiter(',');
  app->add_flag("--intercept", cfg.intercept, "prepend an unpenalized intercept");
  app->add_flag("--indexed", cfg.indexed,
                "read rows on demand through a byte-offset index instead of "
                "loading the file into memory");
}

void add_plan_flags(CLI::App* app, subbag::RunConfig& cfg) {
  auto* delta = app->add_option("--delta", cfg.delta,
                                "subsample size exponent, k = floor(N^(1/2+delta))");
  auto* k = app->add_option("--k", cfg.k, "subsample size (overrides --delta)");
  auto* alpha =
      app->add_option("--alpha", cfg.alpha, "sampling fraction, m = floor(alpha*N/k)");
  auto* m = app->add_option("--m", cfg.m, "number of subsamples (overrides --alpha)");
  delta->excludes(k);
  alpha->excludes(m);
}

void add_fit_flags(CLI::App* app, subbag::RunConfig& cfg) {
  app->add_option("--gamma", cfg.gamma, "adaptive weight exponent")->default_val(1.0);
  app->add_option("--grid", cfg.n_grid, "penalty grid size")->default_val(100);
}

void add_run_flags(CLI::App* app, subbag::RunConfig& cfg) {
  app->add_option("--seed", cfg.seed, "master seed")->default_val(1);
  app->add_option("--threads", cfg.threads, "worker threads")->default_val(1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subbagging variable selection and estimation for large regression datasets"};
  app.require_subcommand(1);

  subbag::RunConfig cfg;

  CLI::App* fit_sub = app.add_subcommand(
      "fit-subsamples", "fit the subsample models and write a summary file");
  add_family_flag(fit_sub, cfg);
  add_data_flags(fit_sub, cfg);
  add_plan_flags(fit_sub, cfg);
  add_run_flags(fit_sub, cfg);
  fit_sub->add_flag("--skip-failures", cfg.skip_failures,
                    "keep going when a subsample fit fails");
  fit_sub->add_option("--summaries-out", cfg.summaries_out, "summary file to write")
      ->required();

  CLI::App* agg = app.add_subcommand(
      "aggregate", "combine summary files, select a model, and report estimates");
  agg->add_option("--summaries-in", cfg.summaries_in, "summary file(s) to read")
      ->required()
      ->take_all();
  agg->add_option("--N", cfg.n_total, "total rows behind the summaries")->required();
  agg->add_flag("--intercept", cfg.intercept,
                "treat the first coordinate as an unpenalized intercept");
  add_fit_flags(agg, cfg);
  agg->add_option("--report-out", cfg.report_out, "write the report as JSON");

  CLI::App* fit = app.add_subcommand("fit", "fit, select, and report in one pass");
  add_family_flag(fit, cfg);
  add_data_flags(fit, cfg);
  add_plan_flags(fit, cfg);
  add_fit_flags(fit, cfg);
  add_run_flags(fit, cfg);
  fit->add_flag("--skip-failures", cfg.skip_failures,
                "keep going when a subsample fit fails");
  fit->add_option("--summaries-out", cfg.summaries_out,
                  "also write the subsample summaries");
  fit->add_option("--report-out", cfg.report_out, "write the report as JSON");

  CLI::App* sim = app.add_subcommand(
      "simulate", "measure estimation and selection quality on synthetic data");
  add_family_flag(sim, cfg);
  sim->add_option("--N", cfg.sim_n, "rows per synthetic dataset");
  add_plan_flags(sim, cfg);
  add_fit_flags(sim, cfg);
  add_run_flags(sim, cfg);
  sim->add_option("--reps", cfg.reps, "number of replications")->default_val(200);
  sim->add_flag("--baseline", cfg.with_baseline,
                "also run the whole-dataset estimator for comparison");
  sim->add_flag("--full-grid", cfg.full_grid,
                "run the full benchmark grid of sizes and plans (slow)");
  sim->add_option("--metrics-out", cfg.metrics_out, "append metrics as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (fit_sub->parsed()) {
      subbag::cmd_fit_subsamples(cfg, std::cout);
    } else if (agg->parsed()) {
      subbag::cmd_aggregate(cfg, std::cout);
    } else if (fit->parsed()) {
      subbag::cmd_fit(cfg, std::cout);
    } else if (sim->parsed()) {
      subbag::cmd_simulate(cfg, std::cout);
    }
  } catch (const subbag::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const subbag::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const subbag::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

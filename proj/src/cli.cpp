#include "subbag/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <utility>

#include "subbag/csv.hpp"
#include "subbag/error.hpp"
#include "subbag/plan.hpp"
#include "subbag/simulate.hpp"
#include "subbag/summary_io.hpp"

namespace subbag {

namespace {

SubbaggingPlan resolve_plan(const RunConfig& cfg, std::uint64_t n) {
  if (cfg.delta.has_value() == cfg.k.has_value()) {
    throw ConfigError("set exactly one of --delta / --k");
  }
  if (cfg.alpha.has_value() == cfg.m.has_value()) {
    throw ConfigError("set exactly one of --alpha / --m");
  }
  SubbaggingPlan plan;
  plan.n = n;
  plan.delta = cfg.delta;
  plan.alpha = cfg.alpha;
  plan.k = cfg.k ? *cfg.k : derive_k(n, *cfg.delta);
  plan.m = cfg.m ? *cfg.m : derive_m(n, plan.k, *cfg.alpha);
  plan.master_seed = cfg.seed;
  validate_plan(plan);
  return plan;
}

std::unique_ptr<Dataset> open_data(const RunConfig& cfg) {
  if (cfg.csv_path.empty()) throw ConfigError("no input file (--data)");
  if (cfg.response.empty()) throw ConfigError("no response column (--response)");
  CsvOptions opts;
  opts.response = cfg.response;
  opts.covariates = cfg.covariates;
  opts.intercept = cfg.intercept;
  opts.storage = cfg.indexed ? CsvStorage::Indexed : CsvStorage::InMemory;
  return load_csv(cfg.csv_path, cfg.family, opts);
}

PlanRun run_configured_plan(const RunConfig& cfg, const Dataset& data,
                            const SubbaggingPlan& plan) {
  EngineOptions eng;
  eng.threads = cfg.threads;
  eng.policy = cfg.skip_failures ? FitPolicy::SkipAndReport : FitPolicy::FailFast;
  PlanRun run = run_plan(data, plan, cfg.family, eng);
  if (run.summaries.empty()) {
    throw NumericalError("every subsample fit failed");
  }
  return run;
}

void write_report_file(const std::string& path, const ReportBundle& rep) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << report_json(rep).dump(2) << "\n";
  if (!out.flush()) throw DataError("short write to '" + path + "'");
}

}  // namespace

void cmd_fit_subsamples(const RunConfig& cfg, std::ostream& out) {
  if (cfg.summaries_out.empty()) {
    throw ConfigError("fit-subsamples needs --summaries-out");
  }
  auto data = open_data(cfg);
  SubbaggingPlan plan = resolve_plan(cfg, data->rows());
  PlanRun run = run_configured_plan(cfg, *data, plan);
  write_summary_file(cfg.summaries_out, cfg.family, plan.master_seed, run.summaries);
  out << "fit " << run.summaries.size() << " subsample(s) of k=" << plan.k << " from n="
      << plan.n << " rows; wrote " << cfg.summaries_out << "\n";
  if (!run.failures.empty()) {
    out << run.failures.size() << " subsample(s) failed and were skipped\n";
  }
}

void cmd_aggregate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.summaries_in.empty()) {
    throw ConfigError("aggregate needs at least one --summaries-in file");
  }
  if (!cfg.n_total) {
    throw ConfigError("aggregate needs --N (total rows behind the summaries)");
  }

  std::vector<SubsampleSummary> summaries;
  Family family = Family::Linear;
  std::uint64_t master_seed = 0;
  std::uint32_t p = 0;
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < cfg.summaries_in.size(); ++i) {
    SummaryFileContents file = read_summary_file(cfg.summaries_in[i]);
    if (i == 0) {
      family = file.family;
      master_seed = file.master_seed;
      p = file.p;
      k = file.k;
    } else if (file.family != family || file.p != p || file.k != k) {
      throw DataError("summary files disagree on family/p/k ('" + cfg.summaries_in[i] + "')");
    }
    for (auto& s : file.summaries) summaries.push_back(std::move(s));
  }
  if (k > *cfg.n_total) {
    throw ConfigError("--N is smaller than the subsample size recorded in the files");
  }

  ReportBundle rep = make_report(family, *cfg.n_total, master_seed, cfg.gamma, cfg.n_grid,
                                 cfg.intercept, {}, std::move(summaries));
  print_report(out, rep);
  if (!cfg.report_out.empty()) write_report_file(cfg.report_out, rep);
}

void cmd_fit(const RunConfig& cfg, std::ostream& out) {
  auto data = open_data(cfg);
  SubbaggingPlan plan = resolve_plan(cfg, data->rows());
  PlanRun run = run_configured_plan(cfg, *data, plan);
  if (!cfg.summaries_out.empty()) {
    write_summary_file(cfg.summaries_out, cfg.family, plan.master_seed, run.summaries);
  }
  ReportBundle rep = make_report(cfg.family, plan.n, plan.master_seed, cfg.gamma, cfg.n_grid,
                                 cfg.intercept, data->covariate_names(), std::move(run.summaries),
                                 std::move(run.failures));
  print_report(out, rep);
  if (!cfg.report_out.empty()) write_report_file(cfg.report_out, rep);
}

namespace {

void append_metrics(const std::string& path, const SimConfig& sim, const SimResult& res) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::app);
  if (!out) throw DataError("cannot write '" + path + "'");

  auto base = [&](const char* kind, const char* estimator) {
    nlohmann::json j;
    j["kind"] = kind;
    j["estimator"] = estimator;
    j["family"] = family_name(sim.family);
    j["n"] = sim.n;
    j["delta"] = sim.delta;
    j["alpha"] = sim.alpha;
    j["k"] = res.k;
    j["m"] = res.m;
    j["reps"] = res.n_reps;
    j["seed"] = sim.master_seed;
    return j;
  };
  auto emit_est = [&](const EstimationMetrics& est, const char* estimator) {
    for (Eigen::Index i = 0; i < est.bias.size(); ++i) {
      nlohmann::json j = base("estimation", estimator);
      j["coord"] = est.coords[static_cast<std::size_t>(i)];
      j["bias"] = est.bias[i];
      j["sd"] = est.sd[i];
      j["rmse"] = est.rmse[i];
      j["ase"] = est.ase[i];
      j["cp"] = est.cp[i];
      out << j.dump() << "\n";
    }
  };
  auto emit_sel = [&](const SelectionMetrics& sel, const char* estimator) {
    nlohmann::json j = base("selection", estimator);
    j["cf"] = sel.cf;
    j["tp"] = sel.tp;
    j["fp"] = sel.fp;
    j["ms"] = sel.ms;
    j["sd_ms"] = sel.sd_ms;
    out << j.dump() << "\n";
  };

  emit_est(res.est, "subbag");
  emit_sel(res.sel, "subbag");
  if (res.base_est) emit_est(*res.base_est, "full");
  if (res.base_sel) emit_sel(*res.base_sel, "full");
}

void print_sim_result(std::ostream& out, const SimConfig& sim, const SimResult& res) {
  out << family_name(sim.family) << " n=" << sim.n << " delta=" << sim.delta
      << " alpha=" << sim.alpha << " -> k=" << res.k << " m=" << res.m << " reps=" << res.n_reps
      << "\n";
  out << std::left << std::setw(10) << "estimator" << std::setw(7) << "coord" << std::right
      << std::setw(11) << "bias*100" << std::setw(11) << "sd*100" << std::setw(11) << "rmse*100"
      << std::setw(11) << "ase*100" << std::setw(9) << "cp%" << "\n";
  out << std::fixed << std::setprecision(2);
  auto rows = [&](const EstimationMetrics& est, const char* name) {
    for (Eigen::Index i = 0; i < est.bias.size(); ++i) {
      out << std::left << std::setw(10) << (i == 0 ? name : "") << std::setw(7)
          << res.true_support[static_cast<std::size_t>(i)] + 1 << std::right << std::setw(11)
          << 100.0 * est.bias[i] << std::setw(11) << 100.0 * est.sd[i] << std::setw(11)
          << 100.0 * est.rmse[i] << std::setw(11) << 100.0 * est.ase[i] << std::setw(9)
          << est.cp[i] << "\n";
    }
  };
  auto sel_row = [&](const SelectionMetrics& sel, const char* name) {
    out << name << ": cf=" << sel.cf << "% tp=" << sel.tp << "% fp=" << sel.fp
        << "% ms=" << sel.ms << " (sd " << sel.sd_ms << ")\n";
  };
  rows(res.est, "subbag");
  if (res.base_est) rows(*res.base_est, "full");
  sel_row(res.sel, "subbag");
  if (res.base_sel) sel_row(*res.base_sel, "full");
  out.unsetf(std::ios::fixed);
  out << std::setprecision(6);
}

}  // namespace

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  SimConfig sim;
  sim.family = cfg.family;
  sim.gamma = cfg.gamma;
  sim.n_grid = cfg.n_grid;
  sim.master_seed = cfg.seed;
  sim.threads = cfg.threads;
  sim.with_baseline = cfg.with_baseline;
  sim.n_reps = cfg.reps;

  if (cfg.full_grid) {
    // The full benchmark grid. This is hours of compute, not minutes.
    sim.n_reps = 1000;
    for (std::uint64_t n : {std::uint64_t{500000}, std::uint64_t{1000000}}) {
      for (double delta : {0.25, 1.0 / 3.0}) {
        for (double alpha : {0.1, 0.5, 1.0}) {
          sim.n = n;
          sim.delta = delta;
          sim.alpha = alpha;
          try {
            derive_m(n, derive_k(n, delta), alpha);
          } catch (const ConfigError&) {
            out << "skipping n=" << n << " delta=" << delta << " alpha=" << alpha
                << " (no full subsample fits)\n";
            continue;
          }
          SimResult res = run_replications(sim);
          print_sim_result(out, sim, res);
          append_metrics(cfg.metrics_out, sim, res);
        }
      }
    }
    return;
  }

  if (!cfg.sim_n) throw ConfigError("simulate needs --N (or --full-grid)");
  sim.n = *cfg.sim_n;
  if (cfg.delta.has_value() == cfg.k.has_value()) {
    throw ConfigError("set exactly one of --delta / --k");
  }
  if (cfg.alpha.has_value() == cfg.m.has_value()) {
    throw ConfigError("set exactly one of --alpha / --m");
  }
  if (cfg.delta) sim.delta = *cfg.delta;
  if (cfg.k) sim.k_override = *cfg.k;
  if (cfg.alpha) sim.alpha = *cfg.alpha;
  if (cfg.m) sim.m_override = *cfg.m;

  SimResult res = run_replications(sim);
  print_sim_result(out, sim, res);
  append_metrics(cfg.metrics_out, sim, res);
}

}  // namespace subbag

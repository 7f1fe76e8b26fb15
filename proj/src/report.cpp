#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>

#include "subbag/cli.hpp"
#include "subbag/error.hpp"

namespace subbag {

ReportBundle make_report(Family family, std::uint64_t n, std::uint64_t master_seed, double gamma,
                         int n_grid, bool intercept, std::vector<std::string> names,
                         std::vector<SubsampleSummary> summaries,
                         std::vector<FitFailure> failures, const CoordinateDescentOptions& cd) {
  ReportBundle rep;
  rep.family = family;
  rep.n = n;
  rep.master_seed = master_seed;
  rep.gamma = gamma;
  rep.intercept = intercept;
  rep.failures = std::move(failures);

  rep.agg = merge(summaries);
  rep.k = rep.agg.k;
  rep.m = rep.agg.m;

  if (names.empty()) {
    for (Eigen::Index j = 0; j < rep.agg.b.size(); ++j) {
      names.push_back("x" + std::to_string(j + 1));
    }
  }
  if (names.size() != static_cast<std::size_t>(rep.agg.b.size())) {
    throw ConfigError("make_report: name count differs from coordinate count");
  }
  rep.names = std::move(names);

  std::optional<Eigen::Index> unpenalized;
  if (intercept) unpenalized = 0;
  Eigen::VectorXd weights = adaptive_weights(rep.agg.beta_bar, gamma, unpenalized);
  std::vector<double> grid = default_lambda_grid(rep.agg, weights, n_grid);
  rep.path = solve_path(rep.agg, weights, grid, rep.k, n, cd);

  const RegularizedFit& sel = select_lambda(rep.path);
  if (rep.m < 2) {
    rep.inference_note = "between-subsample variance needs m >= 2";
  } else if (sel.active_set.empty()) {
    rep.inference_note = "selected model is empty";
  } else {
    rep.inference = build_inference(summaries, sel.beta_hat, sel.active_set, n);
  }
  return rep;
}

namespace {

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

nlohmann::json report_json(const ReportBundle& rep) {
  nlohmann::json j;
  j["schema"] = "subbag-report-v1";
  j["family"] = family_name(rep.family);
  j["n"] = rep.n;
  j["p"] = rep.agg.b.size();
  j["k"] = rep.k;
  j["m"] = rep.m;
  j["master_seed"] = rep.master_seed;
  j["gamma"] = rep.gamma;
  j["intercept"] = rep.intercept;
  j["covariates"] = rep.names;
  j["beta_bar"] = vector_json(rep.agg.beta_bar);
  j["mean_subsample_loss"] = rep.agg.c_loss;

  const RegularizedFit& sel = select_lambda(rep.path);
  j["lambda"] = sel.lambda;
  j["sbic"] = sel.sbic;
  j["df"] = sel.df;
  j["beta_hat"] = vector_json(sel.beta_hat);

  nlohmann::json selected = nlohmann::json::array();
  for (std::size_t i = 0; i < sel.active_set.size(); ++i) {
    const Eigen::Index idx = sel.active_set[i];
    nlohmann::json row;
    row["index"] = idx;
    row["name"] = rep.names[static_cast<std::size_t>(idx)];
    row["estimate"] = sel.beta_hat[idx];
    if (rep.inference) {
      const auto q = static_cast<Eigen::Index>(i);
      row["se"] = rep.inference->se[q];
      row["ci_low"] = rep.inference->ci_low[q];
      row["ci_high"] = rep.inference->ci_high[q];
      row["p_value"] = rep.inference->p_value[q];
      row["degenerate"] = static_cast<bool>(rep.inference->degenerate[i]);
    }
    selected.push_back(std::move(row));
  }
  j["selected"] = std::move(selected);

  if (rep.inference) {
    j["inference"] = "ok";
    j["inflation"] = rep.inference->inflation;
    j["level"] = rep.inference->level;
  } else {
    j["inference"] = "blocked";
    j["inference_note"] = rep.inference_note;
  }

  nlohmann::json path = nlohmann::json::array();
  for (const auto& fit : rep.path.fits) {
    path.push_back({{"lambda", fit.lambda}, {"df", fit.df}, {"sbic", fit.sbic}});
  }
  j["path"] = std::move(path);
  j["selected_path_index"] = rep.path.selected;

  if (!rep.failures.empty()) {
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : rep.failures) {
      fails.push_back({{"subsample_id", f.subsample_id}, {"message", f.message}});
    }
    j["failed_subsamples"] = std::move(fails);
  }
  return j;
}

void print_report(std::ostream& out, const ReportBundle& rep) {
  const RegularizedFit& sel = select_lambda(rep.path);
  out << family_name(rep.family) << " fit: n=" << rep.n << " k=" << rep.k << " m=" << rep.m
      << " seed=" << rep.master_seed << "\n";
  out << "lambda=" << sel.lambda << "  df=" << sel.df << "  sbic=" << sel.sbic << "\n";
  if (!rep.failures.empty()) {
    out << rep.failures.size() << " subsample(s) failed and were skipped\n";
  }

  out << std::left << std::setw(20) << "coefficient" << std::right << std::setw(13) << "estimate";
  if (rep.inference) {
    out << std::setw(13) << "se" << std::setw(13) << "ci_low" << std::setw(13) << "ci_high"
        << std::setw(13) << "p_value";
  }
  out << "\n";
  out << std::setprecision(6);
  for (std::size_t i = 0; i < sel.active_set.size(); ++i) {
    const Eigen::Index idx = sel.active_set[i];
    out << std::left << std::setw(20) << rep.names[static_cast<std::size_t>(idx)] << std::right
        << std::setw(13) << sel.beta_hat[idx];
    if (rep.inference) {
      const auto q = static_cast<Eigen::Index>(i);
      out << std::setw(13) << rep.inference->se[q] << std::setw(13) << rep.inference->ci_low[q]
          << std::setw(13) << rep.inference->ci_high[q] << std::setw(13)
          << rep.inference->p_value[q];
    }
    out << "\n";
  }
  if (sel.active_set.empty()) {
    out << "(no coefficients selected)\n";
  }
  if (!rep.inference) {
    out << "inference: blocked (" << rep.inference_note << ")\n";
  }
}

}  // namespace subbag

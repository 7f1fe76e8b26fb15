#include "subbag/simulate.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "subbag/aggregate.hpp"
#include "subbag/baseline.hpp"
#include "subbag/engine.hpp"
#include "subbag/error.hpp"
#include "subbag/inference.hpp"
#include "subbag/parallel.hpp"
#include "subbag/rng.hpp"

namespace subbag {

namespace {

constexpr double kCoverageZ = 1.96;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RepRecord {
  Eigen::VectorXd beta_true_coords;
  Eigen::VectorXd se_true_coords;  // NaN when inference is blocked (m < 2)
  std::vector<Eigen::Index> active;
  Eigen::VectorXd base_beta_true_coords;
  Eigen::VectorXd base_se_true_coords;
  std::vector<Eigen::Index> base_active;
};

std::vector<Eigen::Index> support_of(const Eigen::VectorXd& v) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) s.push_back(j);
  }
  return s;
}

EstimationMetrics score_estimation(const std::vector<Eigen::VectorXd>& betas,
                                   const std::vector<Eigen::VectorXd>& ses,
                                   const std::vector<Eigen::Index>& coords,
                                   const Eigen::VectorXd& beta0) {
  const auto q = static_cast<Eigen::Index>(coords.size());
  const double r = static_cast<double>(betas.size());
  EstimationMetrics m;
  m.coords = coords;
  m.bias.setZero(q);
  m.sd.setZero(q);
  m.rmse.setZero(q);
  m.ase.setZero(q);
  m.cp.setZero(q);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(q);
  for (const auto& b : betas) mean += b;
  mean /= r;

  Eigen::VectorXd var = Eigen::VectorXd::Zero(q);
  for (const auto& b : betas) var += (b - mean).cwiseAbs2();
  var /= r;

  bool have_se = !ses.empty() && ses.front().size() == q && !std::isnan(ses.front()[0]);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double truth = beta0[coords[static_cast<std::size_t>(j)]];
    m.bias[j] = mean[j] - truth;
    m.sd[j] = std::sqrt(var[j]);
    m.rmse[j] = std::sqrt(m.bias[j] * m.bias[j] + var[j]);
    if (!have_se) {
      m.ase[j] = kNaN;
      m.cp[j] = kNaN;
      continue;
    }
    double se_sum = 0.0;
    double covered = 0.0;
    for (std::size_t rep = 0; rep < betas.size(); ++rep) {
      const double se = ses[rep][j];
      se_sum += se;
      if (std::abs(betas[rep][j] - truth) <= kCoverageZ * se) covered += 1.0;
    }
    m.ase[j] = se_sum / r;
    m.cp[j] = 100.0 * covered / r;
  }
  return m;
}

SelectionMetrics score_selection(const std::vector<std::vector<Eigen::Index>>& actives,
                                 const std::vector<Eigen::Index>& truth, Eigen::Index p) {
  const double r = static_cast<double>(actives.size());
  const double n_true = static_cast<double>(truth.size());
  const double n_noise = static_cast<double>(p) - n_true;
  SelectionMetrics s;
  double ms_sq = 0.0;
  for (const auto& act : actives) {
    double hits = 0.0, false_hits = 0.0;
    {
      std::size_t ti = 0;
      for (Eigen::Index j : act) {
        while (ti < truth.size() && truth[ti] < j) ++ti;
        if (ti < truth.size() && truth[ti] == j) {
          hits += 1.0;
        } else {
          false_hits += 1.0;
        }
      }
    }
    if (act == truth) s.cf += 1.0;
    if (n_true > 0.0) s.tp += hits / n_true;
    if (n_noise > 0.0) s.fp += false_hits / n_noise;
    s.ms += static_cast<double>(act.size());
    ms_sq += static_cast<double>(act.size()) * static_cast<double>(act.size());
  }
  s.cf = 100.0 * s.cf / r;
  s.tp = 100.0 * s.tp / r;
  s.fp = 100.0 * s.fp / r;
  s.ms /= r;
  s.sd_ms = std::sqrt(std::max(0.0, ms_sq / r - s.ms * s.ms));
  return s;
}

}  // namespace

Eigen::VectorXd default_beta0() {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(8);
  b[0] = 3.0;
  b[1] = 1.5;
  b[2] = 2.0;
  return b;
}

InMemoryDataset generate_dataset(Family family, std::uint64_t n, const Eigen::VectorXd& beta0,
                                 std::uint64_t seed) {
  if (n == 0) throw ConfigError("generate_dataset: n must be >= 1");
  const Eigen::Index p = beta0.size();
  const auto rows = static_cast<Eigen::Index>(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd x(rows, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = gauss(rng);
  }

  Eigen::VectorXd eta = x * beta0;
  Eigen::VectorXd y(rows);
  if (family == Family::Linear) {
    for (Eigen::Index i = 0; i < rows; ++i) y[i] = eta[i] + gauss(rng);
  } else {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i = 0; i < rows; ++i) y[i] = unif(rng) < sigmoid(eta[i]) ? 1.0 : 0.0;
  }
  return InMemoryDataset(std::move(y), std::move(x), family);
}

SimResult run_replications(const SimConfig& cfg) {
  if (cfg.n_reps < 1) throw ConfigError("run_replications: n_reps must be >= 1");
  const Eigen::VectorXd beta0 = cfg.beta0.size() > 0 ? cfg.beta0 : default_beta0();
  const std::vector<Eigen::Index> truth = support_of(beta0);
  if (truth.empty()) throw ConfigError("run_replications: beta0 has empty support");

  // Same k/m for every rep; derived once so invalid configs fail up front.
  const std::uint64_t k = cfg.k_override ? cfg.k_override : derive_k(cfg.n, cfg.delta);
  const std::uint64_t m = cfg.m_override ? cfg.m_override : derive_m(cfg.n, k, cfg.alpha);
  const bool inference_ok = m >= 2;

  std::vector<RepRecord> reps(static_cast<std::size_t>(cfg.n_reps));

  auto run_one = [&](std::uint64_t rep) {
    const std::uint64_t rep_seed = mix_seed(cfg.master_seed, rep);
    InMemoryDataset data =
        generate_dataset(cfg.family, cfg.n, beta0, mix_seed(rep_seed, 0));

    SubbaggingPlan plan;
    plan.n = cfg.n;
    plan.k = k;
    plan.m = m;
    plan.master_seed = mix_seed(rep_seed, 1);

    EngineOptions eng;
    eng.newton = cfg.newton;
    eng.threads = 1;  // replications are the parallel axis
    PlanRun run = run_plan(data, plan, cfg.family, eng);

    AggregatedQuadratic agg = merge(run.summaries);
    Eigen::VectorXd weights = adaptive_weights(agg.beta_bar, cfg.gamma);
    std::vector<double> grid = default_lambda_grid(agg, weights, cfg.n_grid);
    LambdaPath path = solve_path(agg, weights, grid, k, cfg.n, cfg.cd);
    const RegularizedFit& sel = select_lambda(path);

    RepRecord& rec = reps[rep];
    rec.active = sel.active_set;
    rec.beta_true_coords.resize(static_cast<Eigen::Index>(truth.size()));
    for (std::size_t j = 0; j < truth.size(); ++j) {
      rec.beta_true_coords[static_cast<Eigen::Index>(j)] = sel.beta_hat[truth[j]];
    }
    if (inference_ok) {
      Eigen::MatrixXd psi = variance_estimator(run.summaries, truth);
      rec.se_true_coords = standard_errors(psi, cfg.n, k, m);
    } else {
      rec.se_true_coords = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(truth.size()), kNaN);
    }

    if (cfg.with_baseline) {
      BaselinePath bp = adaptive_lasso_full(data, cfg.family, cfg.gamma, cfg.n_grid,
                                            std::nullopt, cfg.newton, cfg.cd);
      const RegularizedFit& bsel = select_lambda(bp.path);
      rec.base_active = bsel.active_set;
      rec.base_beta_true_coords.resize(static_cast<Eigen::Index>(truth.size()));
      for (std::size_t j = 0; j < truth.size(); ++j) {
        rec.base_beta_true_coords[static_cast<Eigen::Index>(j)] = bsel.beta_hat[truth[j]];
      }
      SandwichVariance sv = sandwich_variance(data, cfg.family, bsel.beta_hat, truth);
      rec.base_se_true_coords = sandwich_standard_errors(sv, cfg.n);
    }
  };

  parallel_for_index(static_cast<std::uint64_t>(cfg.n_reps), cfg.threads, run_one);

  SimResult out;
  out.k = k;
  out.m = m;
  out.n_reps = cfg.n_reps;
  out.true_support = truth;

  std::vector<Eigen::VectorXd> betas, ses;
  std::vector<std::vector<Eigen::Index>> actives;
  betas.reserve(reps.size());
  ses.reserve(reps.size());
  actives.reserve(reps.size());
  for (const auto& r : reps) {
    betas.push_back(r.beta_true_coords);
    ses.push_back(r.se_true_coords);
    actives.push_back(r.active);
  }
  out.est = score_estimation(betas, inference_ok ? ses : std::vector<Eigen::VectorXd>{}, truth,
                             beta0);
  out.sel = score_selection(actives, truth, beta0.size());

  if (cfg.with_baseline) {
    betas.clear();
    ses.clear();
    actives.clear();
    for (const auto& r : reps) {
      betas.push_back(r.base_beta_true_coords);
      ses.push_back(r.base_se_true_coords);
      actives.push_back(r.base_active);
    }
    out.base_est = score_estimation(betas, ses, truth, beta0);
    out.base_sel = score_selection(actives, truth, beta0.size());
  }
  return out;
}

double variance_inflation_check(const SimResult& result) {
  if (!result.base_est) {
    throw ConfigError("variance_inflation_check: result lacks a baseline");
  }
  double acc = 0.0;
  for (Eigen::Index j = 0; j < result.est.sd.size(); ++j) {
    const double base = result.base_est->sd[j];
    if (base <= 0.0) throw NumericalError("variance_inflation_check: zero baseline sd");
    const double ratio = result.est.sd[j] / base;
    acc += ratio * ratio;
  }
  return acc / static_cast<double>(result.est.sd.size());
}

}  // namespace subbag

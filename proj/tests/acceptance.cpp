// End-to-end acceptance gate. Each numbered criterion prints one PASS/FAIL
// line with the measured quantities; the process exits with the number of
// failed criteria.

#include <json.hpp>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "subbag/aggregate.hpp"
#include "subbag/baseline.hpp"
#include "subbag/dataset.hpp"
#include "subbag/engine.hpp"
#include "subbag/error.hpp"
#include "subbag/family.hpp"
#include "subbag/lasso.hpp"
#include "subbag/newton.hpp"
#include "subbag/simulate.hpp"
#include "subbag/summary_io.hpp"

using namespace subbag;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << detail << "\n";
  std::cout.flush();
  if (!pass) ++g_failures;
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Simulation campaigns shared by criteria 1-4. Same master seed throughout:
// dataset r is identical across campaigns, only the subsampling plan differs.

constexpr std::uint64_t kCampaignSeed = 20260814;
constexpr int kReps = 200;

SimResult campaign(double delta, double alpha, bool baseline) {
  SimConfig cfg;
  cfg.family = Family::Logistic;
  cfg.n = 100000;
  cfg.delta = delta;
  cfg.alpha = alpha;
  cfg.n_reps = kReps;
  cfg.master_seed = kCampaignSeed;
  cfg.with_baseline = baseline;
  cfg.threads = 1;
  return run_replications(cfg);
}

// ---------------------------------------------------------------------------

void criterion_selection(const SimResult& a, const SimResult& b, const SimResult& c,
                         double campaign_seconds) {
  bool pass = campaign_seconds <= 600.0;
  std::ostringstream detail;
  detail << "selection at N=1e5:";
  for (const SimResult* r : {&a, &b, &c}) {
    pass = pass && r->sel.cf >= 95.0 && r->sel.tp == 100.0 && r->sel.fp <= 1.0 &&
           r->sel.ms >= 2.95 && r->sel.ms <= 3.05;
    detail << " [m=" << r->m << " cf=" << fmt(r->sel.cf, 1) << "% tp=" << fmt(r->sel.tp, 1)
           << "% fp=" << fmt(r->sel.fp, 2) << "% ms=" << fmt(r->sel.ms, 3) << "]";
  }
  detail << " (need cf>=95, tp=100, fp<=1, ms in [2.95,3.05]), campaigns took "
         << fmt(campaign_seconds, 1) << "s (need <= 600)";
  report(1, pass, detail.str());
}

void criterion_inflation(const SimResult& b, const SimResult& c) {
  const double rb = std::pow(b.est.sd[0] / b.base_est->sd[0], 2.0);
  const double rc = std::pow(c.est.sd[0] / c.base_est->sd[0], 2.0);
  const double lo_b = 0.7 * 3.0, hi_b = 1.4 * 3.0;  // 1 + 1/0.5 = 3
  const double lo_c = 0.7 * 2.0, hi_c = 1.4 * 2.0;  // 1 + 1/1 = 2
  const bool pass = rb >= lo_b && rb <= hi_b && rc >= lo_c && rc <= hi_c && rb > rc;
  report(2, pass,
         "variance ratio of coefficient 1: alpha=0.5 -> " + fmt(rb) + " (need [" + fmt(lo_b, 1) +
             "," + fmt(hi_b, 1) + "]), alpha=1 -> " + fmt(rc) + " (need [" + fmt(lo_c, 1) + "," +
             fmt(hi_c, 1) + "]), decreasing in alpha: " + (rb > rc ? "yes" : "no"));
}

void criterion_coverage(const SimResult& b, const SimResult& c) {
  bool pass = true;
  std::ostringstream detail;
  detail << "nominal-95% coverage:";
  for (const SimResult* r : {&b, &c}) {
    detail << " [m=" << r->m;
    for (Eigen::Index j = 0; j < 3; ++j) {
      pass = pass && r->est.cp[j] >= 91.5 && r->est.cp[j] <= 97.5;
      detail << " " << fmt(r->est.cp[j], 1) << "%";
    }
    detail << "]";
  }
  detail << " (need each in [91.5,97.5])";
  report(3, pass, detail.str());
}

void criterion_bias(const SimResult& c, const SimResult& d) {
  // Larger subsamples mean less bias; the whole table means the least.
  const double bias_smallk = std::abs(c.est.bias[0]);  // delta=1/4, k=5623
  const double bias_bigk = std::abs(d.est.bias[0]);    // delta=1/3, k=14677
  const double bias_full = std::abs(c.base_est->bias[0]);
  const double mc_c = c.est.sd[0] / std::sqrt(static_cast<double>(kReps));
  const double mc_d = d.est.sd[0] / std::sqrt(static_cast<double>(kReps));
  const double mc_full = c.base_est->sd[0] / std::sqrt(static_cast<double>(kReps));

  const bool ordered = bias_bigk <= bias_smallk + 2.0 * (mc_c + mc_d);
  const bool above_full = bias_smallk >= bias_full - 2.0 * (mc_full + mc_c) &&
                          bias_bigk >= bias_full - 2.0 * (mc_full + mc_d);
  report(4, ordered && above_full,
         "|bias| of coefficient 1: k=14677 -> " + fmt(bias_bigk, 4) + " <= k=5623 -> " +
             fmt(bias_smallk, 4) + " (+2 MC-SE), full-table -> " + fmt(bias_full, 4) +
             " is the floor");
}

// ---------------------------------------------------------------------------
// Criterion 5: coordinate descent against sign-pattern enumeration.

double penalized_objective(const AggregatedQuadratic& agg, double lambda,
                           const Eigen::VectorXd& w, const Eigen::VectorXd& beta) {
  double pen = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) pen += w[j] * std::abs(beta[j]);
  }
  return subbagging_loss(agg, beta) + lambda * pen;
}

double enumeration_minimum(const AggregatedQuadratic& agg, double lambda,
                           const Eigen::VectorXd& w) {
  const Eigen::Index p = agg.b.size();
  std::vector<int> sign(p, -1);
  double best = penalized_objective(agg, lambda, w, Eigen::VectorXd::Zero(p));
  while (true) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (sign[j] != 0) active.push_back(j);
    }
    if (!active.empty()) {
      const Eigen::Index a = static_cast<Eigen::Index>(active.size());
      Eigen::MatrixXd haa(a, a);
      Eigen::VectorXd rhs(a);
      for (Eigen::Index r = 0; r < a; ++r) {
        for (Eigen::Index col = 0; col < a; ++col) haa(r, col) = agg.h_bar(active[r], active[col]);
        rhs[r] = agg.b[active[r]] - 0.5 * lambda * w[active[r]] * sign[active[r]];
      }
      Eigen::VectorXd ba = haa.ldlt().solve(rhs);
      Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
      for (Eigen::Index r = 0; r < a; ++r) beta[active[r]] = ba[r];
      best = std::min(best, penalized_objective(agg, lambda, w, beta));
    }
    Eigen::Index j = 0;
    while (j < p && sign[j] == 1) sign[j++] = -1;
    if (j == p) break;
    ++sign[j];
  }
  return best;
}

void criterion_solver() {
  std::mt19937_64 rng(501);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.2, 2.0);
  double worst_gap = 0.0, worst_kkt = 0.0;
  bool pass = true;
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index p = 2 + static_cast<Eigen::Index>(rng() % 5);
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(
        p + 3, p, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
    AggregatedQuadratic agg;
    agg.m = 1;
    agg.k = 100;
    agg.h_bar = a.transpose() * a / static_cast<double>(p + 3) +
                0.5 * Eigen::MatrixXd::Identity(p, p);
    agg.b = Eigen::VectorXd::NullaryExpr(p, [&](Eigen::Index) { return gauss(rng); });
    agg.c = agg.b.dot(agg.h_bar.ldlt().solve(agg.b)) + 0.1;
    agg.beta_bar = Eigen::VectorXd::Ones(p);

    Eigen::VectorXd w = Eigen::VectorXd::NullaryExpr(p, [&](Eigen::Index) { return unif(rng); });
    const double lambda = unif(rng);

    RegularizedFit fit = solve_penalized(agg, lambda, w, Eigen::VectorXd::Zero(p));
    const double got = penalized_objective(agg, lambda, w, fit.beta_hat);
    const double best = enumeration_minimum(agg, lambda, w);
    const double gap = std::abs(got - best) / std::max(1.0, std::abs(best));
    const double kkt = kkt_residual(agg, lambda, w, fit.beta_hat);
    worst_gap = std::max(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, kkt);
    pass = pass && gap <= 1e-8 && kkt <= 1e-8;
  }
  report(5, pass,
         "200 random penalized quadratics: worst oracle gap " + fmt(worst_gap * 1e9, 3) +
             "e-9, worst KKT residual " + fmt(worst_kkt * 1e9, 3) + "e-9 (need <= 1e-8)");
}

// ---------------------------------------------------------------------------
// Criterion 6: derivatives against finite differences.

void criterion_calculus() {
  std::mt19937_64 rng(601);
  std::normal_distribution<double> gauss;
  double worst_g = 0.0, worst_h = 0.0;
  for (Family fam : {Family::Linear, Family::Logistic}) {
    for (int rep = 0; rep < 100; ++rep) {
      const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 5);
      Observation z;
      z.x = Eigen::VectorXd::NullaryExpr(p, [&](Eigen::Index) { return gauss(rng); });
      z.y = fam == Family::Logistic ? static_cast<double>(rng() % 2) : gauss(rng);
      Eigen::VectorXd beta =
          Eigen::VectorXd::NullaryExpr(p, [&](Eigen::Index) { return 0.5 * gauss(rng); });

      Eigen::VectorXd g = gradient(fam, beta, z);
      Eigen::MatrixXd h = hessian(fam, beta, z);
      const double hg = 1e-6, hh = 1e-5;
      double gerr = 0.0, herr = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::VectorXd up = beta, dn = beta;
        up[j] += hg;
        dn[j] -= hg;
        gerr = std::max(gerr, std::abs((loss(fam, up, z) - loss(fam, dn, z)) / (2 * hg) - g[j]));
        up = beta;
        dn = beta;
        up[j] += hh;
        dn[j] -= hh;
        Eigen::VectorXd col = (gradient(fam, up, z) - gradient(fam, dn, z)) / (2 * hh);
        herr = std::max(herr, (col - h.col(j)).cwiseAbs().maxCoeff());
      }
      worst_g = std::max(worst_g, gerr / std::max(1.0, g.cwiseAbs().maxCoeff()));
      worst_h = std::max(worst_h, herr / std::max(1.0, h.cwiseAbs().maxCoeff()));
    }
  }
  report(6, worst_g <= 1e-6 && worst_h <= 1e-5,
         "finite differences, 100 draws per family: worst gradient error " + fmt(worst_g * 1e7, 3) +
             "e-7 (need <= 1e-6), worst hessian error " + fmt(worst_h * 1e6, 3) +
             "e-6 (need <= 1e-5)");
}

// ---------------------------------------------------------------------------
// Criterion 7: the retained quadratic reproduces the subsample loss surface.

void criterion_lsa() {
  std::mt19937_64 rng(701);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;

  // Linear: exact. Fit, then compare the loss with its quadratic expansion.
  const Eigen::Index n = 600, p = 4;
  Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(
      n, p, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
  Eigen::VectorXd beta0(p);
  beta0 << 1.0, -1.0, 0.5, 0.0;
  Eigen::VectorXd y = x * beta0;
  for (Eigen::Index i = 0; i < n; ++i) y[i] += gauss(rng);
  InMemoryDataset lin(y, x, Family::Linear);
  NewtonResult lfit = newton_fit(lin, Family::Linear, RowSelection::all(n),
                                 Eigen::VectorXd::Zero(p));
  double worst_lin = 0.0;
  for (int rep = 0; rep < 30; ++rep) {
    Eigen::VectorXd b =
        lfit.beta + Eigen::VectorXd::NullaryExpr(p, [&](Eigen::Index) { return gauss(rng); });
    const double exact = average_loss(lin, Family::Linear, RowSelection::all(n), b);
    const double quad = lfit.loss + 0.5 * (b - lfit.beta).dot(lfit.hessian * (b - lfit.beta));
    worst_lin = std::max(worst_lin, std::abs(exact - quad) / std::max(1.0, std::abs(exact)));
  }

  // Logistic: third-order remainder, so error/eps^2 must fall with eps.
  Eigen::MatrixXd xl = Eigen::MatrixXd::NullaryExpr(
      1500, p, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
  Eigen::VectorXd yl(1500);
  for (Eigen::Index i = 0; i < 1500; ++i) {
    yl[i] = unif(rng) < sigmoid(xl.row(i).dot(beta0)) ? 1.0 : 0.0;
  }
  InMemoryDataset logi(yl, xl, Family::Logistic);
  NewtonResult gfit = newton_fit(logi, Family::Logistic, RowSelection::all(1500),
                                 Eigen::VectorXd::Zero(p));
  Eigen::VectorXd dir = Eigen::VectorXd::Ones(p).normalized();
  std::vector<double> ratios;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    Eigen::VectorXd b = gfit.beta + eps * dir;
    const double exact = average_loss(logi, Family::Logistic, RowSelection::all(1500), b);
    const double quad = gfit.loss + 0.5 * (b - gfit.beta).dot(gfit.hessian * (b - gfit.beta));
    ratios.push_back(std::abs(exact - quad) / (eps * eps));
  }
  const bool decreasing = ratios[0] > ratios[1] && ratios[1] > ratios[2];
  report(7, worst_lin <= 1e-10 && decreasing,
         "linear expansion error " + fmt(worst_lin * 1e12, 3) +
             "e-12 (need <= 1e-10); logistic remainder/eps^2 at eps=1e-2,1e-3,1e-4: " +
             fmt(ratios[0], 4) + " > " + fmt(ratios[1], 4) + " > " + fmt(ratios[2], 4) + ": " +
             (decreasing ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// Criteria 8-10 drive the installed command-line binary.

std::string g_tmpdir;

std::string tmp(const std::string& name) { return g_tmpdir + "/" + name; }

int run_cli(const std::string& args, const std::string& stdout_to = "/dev/null") {
  const std::string cmd =
      std::string(SUBBAG_CLI_PATH) + " " + args + " > " + stdout_to + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_fixture_csv(const std::string& path, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Eigen::VectorXd beta(4);
  beta << 2.0, -1.5, 0.0, 0.0;
  std::ofstream out(path);
  out << "y,x1,x2,x3,x4\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd xr = Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return gauss(rng); });
    out << (unif(rng) < sigmoid(xr.dot(beta)) ? 1 : 0);
    for (Eigen::Index j = 0; j < 4; ++j) out << "," << xr[j];
    out << "\n";
  }
}

void criterion_determinism() {
  const std::string csv = tmp("fixture.csv");
  write_fixture_csv(csv, 2000, 801);
  const std::string base =
      "fit --family logistic --data " + csv + " --response y --k 400 --m 5 --seed 17";

  bool pass = true;
  std::ostringstream detail;

  const int rc1 = run_cli(base + " --threads 1 --report-out " + tmp("r1.json"));
  const int rc8 = run_cli(base + " --threads 8 --report-out " + tmp("r8.json"));
  const bool threads_same =
      rc1 == 0 && rc8 == 0 && slurp(tmp("r1.json")) == slurp(tmp("r8.json"));
  pass = pass && threads_same;
  detail << "1-vs-8-thread reports byte-identical: " << (threads_same ? "yes" : "no");

  const int rcs = run_cli(
      "fit-subsamples --family logistic --data " + csv +
      " --response y --k 400 --m 5 --seed 17 --threads 8 --summaries-out " + tmp("s.sbag"));
  const int rca = run_cli("aggregate --summaries-in " + tmp("s.sbag") +
                          " --N 2000 --report-out " + tmp("r2.json"));
  const bool twophase_same =
      rcs == 0 && rca == 0 && slurp(tmp("r1.json")) == slurp(tmp("r2.json"));
  pass = pass && twophase_same;
  detail << "; two-phase report byte-identical: " << (twophase_same ? "yes" : "no");

  SummaryFileContents contents = read_summary_file(tmp("s.sbag"));
  write_summary_file(tmp("s2.sbag"), contents.family, contents.master_seed, contents.summaries);
  const bool roundtrip = slurp(tmp("s.sbag")) == slurp(tmp("s2.sbag"));
  pass = pass && roundtrip;
  detail << "; summary file round-trip bit-exact: " << (roundtrip ? "yes" : "no");

  std::string bytes = slurp(tmp("s.sbag"));
  bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0xFF);
  std::ofstream(tmp("bad.sbag"), std::ios::binary) << bytes;
  const int rcbad =
      run_cli("aggregate --summaries-in " + tmp("bad.sbag") + " --N 2000");
  const bool crc_caught = rcbad == 3;
  pass = pass && crc_caught;
  detail << "; corrupted summary file rejected with exit 3: " << (crc_caught ? "yes" : "no");

  report(8, pass, detail.str());
}

void criterion_degenerate_plan() {
  std::mt19937_64 rng(901);
  std::normal_distribution<double> gauss;
  const Eigen::Index n = 2000, p = 5;
  Eigen::VectorXd beta0(p);
  beta0 << 3.0, 1.5, 2.0, 0.0, 0.0;
  Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(
      n, p, [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
  Eigen::VectorXd y = x * beta0;
  for (Eigen::Index i = 0; i < n; ++i) y[i] += gauss(rng);
  InMemoryDataset data(y, x, Family::Linear);

  SubbaggingPlan plan;
  plan.n = n;
  plan.k = n;
  plan.m = 1;
  plan.master_seed = 3;
  PlanRun run = run_plan(data, plan, Family::Linear, {});
  AggregatedQuadratic agg = merge(run.summaries);
  Eigen::VectorXd w = adaptive_weights(agg.beta_bar, 1.0);
  auto grid = default_lambda_grid(agg, w, 100);
  LambdaPath sub = solve_path(agg, w, grid, n, n);

  BaselinePath full = adaptive_lasso_full(data, Family::Linear, 1.0, 100);

  double worst = 0.0;
  bool pass = sub.fits.size() == full.path.fits.size() && sub.selected == full.path.selected;
  for (std::size_t i = 0; pass && i < sub.fits.size(); ++i) {
    worst = std::max(worst, std::abs(sub.grid[i] - full.path.grid[i]));
    worst = std::max(worst,
                     (sub.fits[i].beta_hat - full.path.fits[i].beta_hat).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(sub.fits[i].sbic - full.path.fits[i].sbic) /
                                std::max(1.0, std::abs(full.path.fits[i].sbic)));
  }
  pass = pass && worst <= 1e-12;
  report(9, pass,
         "m=1, k=N plan against the whole-table path: worst field difference " +
             fmt(worst * 1e15, 3) + "e-15 (need <= 1e-12)");
}

void criterion_memory() {
  const std::string csv = tmp("big.csv");
  {
    std::mt19937_64 rng(1001);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    Eigen::VectorXd beta = default_beta0();
    std::ofstream out(csv);
    out << "y,x1,x2,x3,x4,x5,x6,x7,x8\n";
    char buf[32];
    std::string line;
    for (int i = 0; i < 1000000; ++i) {
      line.clear();
      double eta = 0.0;
      double xs[8];
      for (int j = 0; j < 8; ++j) {
        xs[j] = gauss(rng);
        eta += beta[j] * xs[j];
      }
      line += unif(rng) < sigmoid(eta) ? '1' : '0';
      for (int j = 0; j < 8; ++j) {
        std::snprintf(buf, sizeof(buf), ",%.6f", xs[j]);
        line += buf;
      }
      line += '\n';
      out << line;
    }
  }

  const pid_t pid = fork();
  if (pid == 0) {
    if (!std::freopen("/dev/null", "w", stdout)) _exit(126);
    if (!std::freopen("/dev/null", "w", stderr)) _exit(126);
    execl(SUBBAG_CLI_PATH, SUBBAG_CLI_PATH, "fit", "--family", "logistic", "--data",
          csv.c_str(), "--response", "y", "--indexed", "--k", "1000", "--m", "20", "--seed",
          "5", (char*)nullptr);
    _exit(127);
  }
  int status = 0;
  struct rusage ru {};
  wait4(pid, &status, 0, &ru);
  const bool exited_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  const long peak_kib = ru.ru_maxrss;  // Linux reports KiB
  const bool pass = exited_ok && peak_kib <= 64 * 1024;
  report(10, pass,
         "indexed fit of a 1e6-row table (k=1000): exit " +
             std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ", peak RSS " +
             std::to_string(peak_kib / 1024) + " MiB (need <= 64 MiB)");
  std::remove(csv.c_str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  char tmpl[] = "/tmp/subbag_acceptance_XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::cerr << "cannot create scratch directory\n";
    return 1;
  }
  g_tmpdir = tmpl;

  std::cout << "running simulation campaigns (logistic, N=100000, " << kReps
            << " replications each)...\n";
  SimResult run_a = campaign(0.25, 0.1, false);       // k=5623, m=1
  SimResult run_b = campaign(0.25, 0.5, true);        // k=5623, m=8
  SimResult run_c = campaign(0.25, 1.0, true);        // k=5623, m=17
  SimResult run_d = campaign(1.0 / 3.0, 1.0, true);   // k=14677, m=6
  const double campaign_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  criterion_selection(run_a, run_b, run_c, campaign_seconds);
  criterion_inflation(run_b, run_c);
  criterion_coverage(run_b, run_c);
  criterion_bias(run_c, run_d);
  criterion_solver();
  criterion_calculus();
  criterion_lsa();
  criterion_determinism();
  criterion_degenerate_plan();
  criterion_memory();

  std::filesystem::remove_all(g_tmpdir);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (g_failures == 0 ? "all criteria passed" : "criteria failed") << " in "
            << fmt(elapsed, 1) << "s\n";
  return g_failures;
}

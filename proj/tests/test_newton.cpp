#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "subbag/dataset.hpp"
#include "subbag/engine.hpp"
#include "subbag/error.hpp"
#include "subbag/family.hpp"
#include "subbag/newton.hpp"
#include "subbag/rng.hpp"

using namespace subbag;

namespace {

InMemoryDataset linear_data(Eigen::Index n, const Eigen::VectorXd& beta, double noise,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(
      n, beta.size(), [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
  Eigen::VectorXd y = x * beta;
  for (Eigen::Index i = 0; i < n; ++i) y[i] += noise * gauss(rng);
  return InMemoryDataset(std::move(y), std::move(x), Family::Linear);
}

InMemoryDataset logistic_data(Eigen::Index n, const Eigen::VectorXd& beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(
      n, beta.size(), [&](Eigen::Index, Eigen::Index) { return gauss(rng); });
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = unif(rng) < sigmoid(x.row(i).dot(beta)) ? 1.0 : 0.0;
  }
  return InMemoryDataset(std::move(y), std::move(x), Family::Logistic);
}

}  // namespace

TEST_CASE("linear fit equals the normal equations") {
  Eigen::VectorXd beta(4);
  beta << 1.0, -2.0, 0.5, 0.0;
  InMemoryDataset data = linear_data(300, beta, 1.0, 21);
  NewtonResult res = newton_fit(data, Family::Linear, RowSelection::all(300),
                                Eigen::VectorXd::Zero(4));
  Eigen::VectorXd ols =
      (data.x().transpose() * data.x()).ldlt().solve(data.x().transpose() * data.y());
  CHECK((res.beta - ols).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(res.grad_norm <= 1e-8);
}

TEST_CASE("interpolating data drives the loss to zero") {
  Eigen::VectorXd beta(3);
  beta << 2.0, -1.0, 0.25;
  InMemoryDataset data = linear_data(100, beta, 0.0, 22);
  NewtonResult res = newton_fit(data, Family::Linear, RowSelection::all(100),
                                Eigen::VectorXd::Zero(3));
  CHECK(res.loss <= 1e-16);
  CHECK((res.beta - beta).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("logistic fit zeroes the gradient, checked independently") {
  Eigen::VectorXd beta(3);
  beta << 1.0, -0.5, 0.0;
  InMemoryDataset data = logistic_data(2000, beta, 23);
  NewtonResult res = newton_fit(data, Family::Logistic, RowSelection::all(2000),
                                Eigen::VectorXd::Zero(3));

  // Recompute the average gradient by a straight per-row loop.
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
  for (Eigen::Index i = 0; i < 2000; ++i) {
    const double t = data.x().row(i).dot(res.beta);
    g += (1.0 / (1.0 + std::exp(-t)) - data.y()[i]) * data.x().row(i).transpose();
  }
  g /= 2000.0;
  CHECK(g.cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((res.beta - beta).cwiseAbs().maxCoeff() <= 0.25);
}

TEST_CASE("fits over an index subset use exactly those rows") {
  Eigen::VectorXd beta(2);
  beta << 1.0, 2.0;
  InMemoryDataset data = linear_data(500, beta, 0.5, 24);
  std::vector<std::uint64_t> idx(100);
  std::iota(idx.begin(), idx.end(), 50);
  NewtonResult res = newton_fit(data, Family::Linear, RowSelection::of(idx),
                                Eigen::VectorXd::Zero(2));
  Eigen::MatrixXd xs = data.x().middleRows(50, 100);
  Eigen::VectorXd ys = data.y().segment(50, 100);
  Eigen::VectorXd ols = (xs.transpose() * xs).ldlt().solve(xs.transpose() * ys);
  CHECK((res.beta - ols).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("a rank-deficient design is reported as a numerical error") {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(50, 3);
  for (Eigen::Index i = 0; i < 50; ++i) {
    x(i, 0) = gauss(rng);
    x(i, 1) = x(i, 0);  // duplicate column
    x(i, 2) = gauss(rng);
  }
  Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(50, [&](Eigen::Index) { return gauss(rng); });
  InMemoryDataset data(std::move(y), std::move(x), Family::Linear);
  CHECK_THROWS_AS(newton_fit(data, Family::Linear, RowSelection::all(50),
                             Eigen::VectorXd::Zero(3)),
                  NumericalError);
}

TEST_CASE("separable logistic data converges by gradient, not by blowing up") {
  // All-one responses on a constant covariate: the optimum is at infinity but
  // the gradient decays exponentially, so the fit stops at a finite beta with
  // a near-zero loss instead of erroring or returning garbage.
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(40, 1);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(40);
  InMemoryDataset data(std::move(y), std::move(x), Family::Logistic);
  NewtonResult res = newton_fit(data, Family::Logistic, RowSelection::all(40),
                                Eigen::VectorXd::Zero(1));
  CHECK(std::isfinite(res.beta[0]));
  CHECK(res.beta[0] > 10.0);
  CHECK(res.loss < 1e-6);
  CHECK(res.grad_norm <= NewtonOptions{}.tol);
}

TEST_CASE("average loss is exactly quadratic around a linear optimum") {
  Eigen::VectorXd beta(3);
  beta << 1.0, -1.0, 0.5;
  InMemoryDataset data = linear_data(400, beta, 1.0, 26);
  NewtonResult res = newton_fit(data, Family::Linear, RowSelection::all(400),
                                Eigen::VectorXd::Zero(3));
  std::mt19937_64 rng(27);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd b =
        res.beta + Eigen::VectorXd::NullaryExpr(3, [&](Eigen::Index) { return gauss(rng); });
    const double exact = average_loss(data, Family::Linear, RowSelection::all(400), b);
    const double quad =
        res.loss + 0.5 * (b - res.beta).dot(res.hessian * (b - res.beta));
    CHECK(std::abs(exact - quad) / std::max(1.0, std::abs(exact)) <= 1e-10);
  }
}

TEST_CASE("logistic quadratic expansion error shrinks like a cubic") {
  Eigen::VectorXd beta(3);
  beta << 1.0, -0.5, 0.25;
  InMemoryDataset data = logistic_data(1500, beta, 28);
  NewtonResult res = newton_fit(data, Family::Logistic, RowSelection::all(1500),
                                Eigen::VectorXd::Zero(3));
  Eigen::VectorXd dir(3);
  dir << 1.0, 1.0, -1.0;
  dir.normalize();
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    Eigen::VectorXd b = res.beta + eps * dir;
    const double exact = average_loss(data, Family::Logistic, RowSelection::all(1500), b);
    const double quad =
        res.loss + 0.5 * (b - res.beta).dot(res.hessian * (b - res.beta));
    const double ratio = std::abs(exact - quad) / (eps * eps);
    CHECK(ratio < prev_ratio);
    prev_ratio = ratio;
  }
}

TEST_CASE("chunked accumulation matches one-shot reduction") {
  Eigen::VectorXd beta(4);
  beta << 0.5, -0.5, 1.0, 0.0;
  InMemoryDataset data = logistic_data(1000, beta, 29);
  Eigen::VectorXd at = Eigen::VectorXd::Constant(4, 0.1);

  Eigen::VectorXd g_small, g_big;
  Eigen::MatrixXd h_small, h_big;
  average_grad_hess(data, Family::Logistic, RowSelection::all(1000), at, g_small, h_small, 64);
  average_grad_hess(data, Family::Logistic, RowSelection::all(1000), at, g_big, h_big, 100000);
  CHECK((g_small - g_big).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((h_small - h_big).cwiseAbs().maxCoeff() <= 1e-13);

  const double l_small = average_loss(data, Family::Logistic, RowSelection::all(1000), at, 64);
  const double l_big = average_loss(data, Family::Logistic, RowSelection::all(1000), at, 100000);
  CHECK(std::abs(l_small - l_big) <= 1e-13);
}

TEST_CASE("a whole-range selection matches the explicit index list bit for bit") {
  Eigen::VectorXd beta(3);
  beta << 2.0, -1.0, 0.5;
  InMemoryDataset data = logistic_data(900, beta, 30);
  std::vector<std::uint64_t> idx(900);
  std::iota(idx.begin(), idx.end(), 0);

  NewtonResult whole = newton_fit(data, Family::Logistic, RowSelection::all(900),
                                  Eigen::VectorXd::Zero(3));
  NewtonResult listed = newton_fit(data, Family::Logistic, RowSelection::of(idx),
                                   Eigen::VectorXd::Zero(3));
  CHECK(whole.beta == listed.beta);
  CHECK(whole.hessian == listed.hessian);
  CHECK(whole.loss == listed.loss);
}

TEST_CASE("plan runs are identical for any thread count") {
  Eigen::VectorXd beta(3);
  beta << 1.5, -1.0, 0.5;
  InMemoryDataset data = logistic_data(3000, beta, 31);
  SubbaggingPlan plan;
  plan.n = 3000;
  plan.k = 500;
  plan.m = 6;
  plan.master_seed = 7;

  EngineOptions one;
  one.threads = 1;
  EngineOptions eight;
  eight.threads = 8;
  PlanRun a = run_plan(data, plan, Family::Logistic, one);
  PlanRun b = run_plan(data, plan, Family::Logistic, eight);
  REQUIRE(a.summaries.size() == 6);
  REQUIRE(b.summaries.size() == 6);
  for (std::size_t s = 0; s < 6; ++s) {
    CHECK(a.summaries[s].subsample_id == s);
    CHECK(a.summaries[s].seed == mix_seed(7, s));
    CHECK(a.summaries[s].beta_tilde == b.summaries[s].beta_tilde);
    CHECK(a.summaries[s].hessian == b.summaries[s].hessian);
    CHECK(a.summaries[s].loss_at_opt == b.summaries[s].loss_at_opt);
  }
}

TEST_CASE("fit policies: fail fast versus skip and report") {
  // All-zero covariate: every subsample Hessian has an exactly zero pivot.
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(100, 2);
  Eigen::VectorXd y(100);
  for (Eigen::Index i = 0; i < 100; ++i) {
    x(i, 0) = gauss(rng);
    x(i, 1) = 0.0;
    y[i] = gauss(rng);
  }
  InMemoryDataset data(std::move(y), std::move(x), Family::Linear);
  SubbaggingPlan plan;
  plan.n = 100;
  plan.k = 20;
  plan.m = 3;
  plan.master_seed = 1;

  EngineOptions fail_fast;
  fail_fast.policy = FitPolicy::FailFast;
  CHECK_THROWS_AS(run_plan(data, plan, Family::Linear, fail_fast), NumericalError);

  EngineOptions skip;
  skip.policy = FitPolicy::SkipAndReport;
  PlanRun run = run_plan(data, plan, Family::Linear, skip);
  CHECK(run.summaries.empty());
  REQUIRE(run.failures.size() == 3);
  CHECK(run.failures[0].subsample_id == 0);
  CHECK(!run.failures[0].message.empty());
}

TEST_CASE("plan size must match the dataset") {
  InMemoryDataset data = linear_data(50, Eigen::VectorXd::Ones(2), 1.0, 32);
  SubbaggingPlan plan;
  plan.n = 49;
  plan.k = 10;
  plan.m = 2;
  CHECK_THROWS_AS(run_plan(data, plan, Family::Linear, {}), ConfigError);
}

TEST_CASE("hitting the iteration cap raises a numerical error") {
  Eigen::VectorXd beta(2);
  beta << 3.0, -2.0;
  InMemoryDataset data = logistic_data(500, beta, 33);
  NewtonOptions opts;
  opts.max_iter = 1;
  CHECK_THROWS_AS(newton_fit(data, Family::Logistic, RowSelection::all(500),
                             Eigen::VectorXd::Zero(2), opts),
                  NumericalError);
}

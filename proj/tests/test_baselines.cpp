#include <doctest.h>

#include <cmath>

#include "sparsemd/baselines.hpp"
#include "test_oracles.hpp"

using namespace sparsemd;
using sparsemd::testing::QuadraticOracle;

namespace {
// Slow reference solver: proximal gradient (soft-thresholded gradient steps)
// with a conservative stepsize, run to high precision.
Eigen::VectorXd ista_reference(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                               double lambda, long iters) {
  const Eigen::Index n = design.cols();
  const double n_obs = static_cast<double>(design.rows());
  const Eigen::MatrixXd gram = design.transpose() * design / n_obs;
  const Eigen::VectorXd corr = design.transpose() * response / n_obs;
  const double lip = gram.operatorNorm();
  const double step = 1.0 / lip;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (long it = 0; it < iters; ++it) {
    const Eigen::VectorXd grad = gram * x - corr;
    Eigen::VectorXd z = x - step * grad;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m = std::abs(z(j)) - step * lambda;
      z(j) = m > 0.0 ? std::copysign(m, z(j)) : 0.0;
    }
    x = z;
  }
  return x;
}

double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                       double lambda, const Eigen::VectorXd& x) {
  const double n_obs = static_cast<double>(design.rows());
  return 0.5 * (response - design * x).squaredNorm() / n_obs + lambda * x.lpNorm<1>();
}
}  // namespace

TEST_CASE("theoretical penalty level") {
  CHECK(lambda_theory(0.1, 50000, 10000) ==
        doctest::Approx(0.2 * std::sqrt(2.0 * std::log(50000.0) / 10000.0)));
  CHECK(lambda_theory(0.0, 100, 10) == 0.0);
  CHECK(lambda_theory(1.0, 100, 2000) ==
        doctest::Approx(lambda_theory(1.0, 100, 1000) / std::sqrt(2.0)));
}

TEST_CASE("lasso with no penalty on an orthonormal design is least squares") {
  Eigen::MatrixXd design = Eigen::MatrixXd::Identity(4, 4) * 2.0;
  Eigen::VectorXd response(4);
  response << 1.0, -2.0, 0.5, 3.0;
  LassoConfig cfg;
  cfg.lambda = 0.0;
  const Eigen::VectorXd x = lasso_cd(design, response, cfg);
  CHECK((design * x - response).norm() < 1e-8);
}

TEST_CASE("scalar lasso closed form") {
  RngStream rng(81, 0);
  Eigen::MatrixXd design(30, 1);
  Eigen::VectorXd response(30);
  for (int i = 0; i < 30; ++i) {
    design(i, 0) = rng.next_gaussian();
    response(i) = 0.8 * design(i, 0) + 0.1 * rng.next_gaussian();
  }
  LassoConfig cfg;
  cfg.lambda = 0.05;
  const Eigen::VectorXd x = lasso_cd(design, response, cfg);
  const double rho = design.col(0).dot(response) / 30.0;
  const double a = design.col(0).squaredNorm() / 30.0;
  const double expect =
      std::abs(rho) > cfg.lambda ? std::copysign(std::abs(rho) - cfg.lambda, rho) / a : 0.0;
  CHECK(x(0) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("coordinate descent matches a slow reference solver") {
  RngStream rng(82, 0);
  const Eigen::Index n = 5, n_obs = 50;
  Eigen::MatrixXd design(n_obs, n);
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(n);
  truth(1) = 1.0;
  truth(3) = -0.5;
  Eigen::VectorXd response(n_obs);
  for (Eigen::Index i = 0; i < n_obs; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) design(i, j) = rng.next_gaussian();
    response(i) = design.row(i).dot(truth) + 0.05 * rng.next_gaussian();
  }
  LassoConfig cfg;
  cfg.lambda = 0.02;
  cfg.tol = 1e-12;
  const Eigen::VectorXd x = lasso_cd(design, response, cfg);
  const Eigen::VectorXd ref = ista_reference(design, response, cfg.lambda, 200000);
  CHECK(lasso_objective(design, response, cfg.lambda, x) <=
        lasso_objective(design, response, cfg.lambda, ref) + 1e-6);
}

TEST_CASE("lasso satisfies the subgradient optimality conditions") {
  RngStream rng(83, 0);
  const Eigen::Index n = 12, n_obs = 60;
  Eigen::MatrixXd design(n_obs, n);
  Eigen::VectorXd response(n_obs);
  for (Eigen::Index i = 0; i < n_obs; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) design(i, j) = rng.next_gaussian();
    response(i) = rng.next_gaussian();
  }
  LassoConfig cfg;
  cfg.lambda = 0.1;
  cfg.tol = 1e-10;
  const Eigen::VectorXd x = lasso_cd(design, response, cfg);
  const Eigen::VectorXd grad = design.transpose() * (design * x - response) / n_obs;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (x(j) == 0.0)
      CHECK(std::abs(grad(j)) <= cfg.lambda + 10.0 * cfg.tol);
    else
      CHECK(std::abs(grad(j) + std::copysign(cfg.lambda, x(j))) <= 1e-6);
  }
}

TEST_CASE("lasso objective is non-increasing over sweeps") {
  RngStream rng(84, 0);
  const Eigen::Index n = 8, n_obs = 40;
  Eigen::MatrixXd design(n_obs, n);
  Eigen::VectorXd response(n_obs);
  for (Eigen::Index i = 0; i < n_obs; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) design(i, j) = rng.next_gaussian();
    response(i) = rng.next_gaussian();
  }
  LassoConfig cfg;
  cfg.lambda = 0.05;
  double prev = lasso_objective(design, response, cfg.lambda, Eigen::VectorXd::Zero(n));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int sweep = 0; sweep < 10; ++sweep) {
    LassoConfig one = cfg;
    one.max_iters = 1;
    one.tol = 0.0;
    x = lasso_cd(design, response, one, &x);
    const double obj = lasso_objective(design, response, cfg.lambda, x);
    CHECK(obj <= prev + 1e-12);
    prev = obj;
  }
}

TEST_CASE("lasso recovers most of the support at the theoretical penalty") {
  const Eigen::Index n = 200;
  const long s = 5;
  const double sigma = 0.1;
  const long n_obs = static_cast<long>(10.0 * s * std::log(static_cast<double>(n)));
  int hits = 0, total = 0;
  for (int seed = 0; seed < 20; ++seed) {
    RngStream rng(90 + seed, 0);
    GlrModel model = make_paper_instance(n, s, 1.0, 1.0, sigma, RegressorKind::Gaussian,
                                         NoiseKind::Gaussian, rng);
    Eigen::MatrixXd design(n_obs, n);
    Eigen::VectorXd response(n_obs);
    for (long i = 0; i < n_obs; ++i) {
      const Observation obs = model.sample_observation(rng);
      design.row(i) = obs.regressor.flat().transpose();
      response(i) = obs.response;
    }
    LassoConfig cfg;
    cfg.lambda = lambda_theory(sigma, n, n_obs);
    const Eigen::VectorXd x = lasso_cd(design, response, cfg);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (model.x_star()(j) != 0.0) {
        ++total;
        if (x(j) != 0.0) ++hits;
      }
    }
  }
  CHECK(hits >= static_cast<int>(0.9 * total));
}

TEST_CASE("vanilla smd is a thin wrapper over one stage") {
  Eigen::VectorXd x_star(5);
  x_star << 1, 0, -1, 0, 0.5;
  QuadraticOracle oracle{x_star};
  const ProxSetup setup = ProxSetup::l1_power(5);

  RngStream a(85, 0), b(85, 0);
  const VanillaSmdResult v =
      vanilla_smd(oracle, setup, 200, StepsizeRule::constant(4.0), a);
  StageConfig cfg;
  cfg.steps = 200;
  cfg.stepsize = StepsizeRule::constant(4.0);
  cfg.x0 = oracle.zero();
  const StageResult r = run_stage(oracle, setup, cfg, b);
  CHECK((v.estimate - r.average).l2() == 0.0);
  CHECK_FALSE(v.trace.empty());
  CHECK_THROWS_AS(vanilla_smd(oracle, setup, 0, StepsizeRule::constant(1.0), a),
                  std::invalid_argument);
}

TEST_CASE("averaged error decays at the 1/t rate on noise-free observations") {
  // noiseless linear model: the averaged iterate's l2 error follows the
  // sublinear 1/t rate of single-run mirror descent
  std::vector<double> slopes;
  for (int seed = 0; seed < 5; ++seed) {
    RngStream inst(87, 0);
    GlrModel model = make_paper_instance(20, 3, 1.0, 1.0, 0.0, RegressorKind::Gaussian,
                                         NoiseKind::Gaussian, inst);
    RngStream rng(88 + seed, 0);
    const VanillaSmdResult v = vanilla_smd(model, ProxSetup::l1_power(20), 30000,
                                           StepsizeRule::per_sample(1.0), rng);
    std::vector<double> lx, ly;
    for (const auto& rec : v.trace.records()) {
      if (rec.oracle_calls < 30) continue;
      lx.push_back(std::log(static_cast<double>(rec.oracle_calls)));
      ly.push_back(std::log(rec.metrics.at("l2_error")));
    }
    REQUIRE(lx.size() >= 10);
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  std::sort(slopes.begin(), slopes.end());
  CHECK(slopes[2] == doctest::Approx(-1.0).epsilon(0.2));
}

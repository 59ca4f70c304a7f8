#include "sparsemd/baselines.hpp"

#include <cmath>

namespace sparsemd {

double lambda_theory(double sigma, Eigen::Index n, long N) {
  if (N < 1) throw std::invalid_argument("lambda_theory: N must be >= 1");
  if (n < 2) throw std::invalid_argument("lambda_theory: n must be >= 2");
  return 2.0 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)) / N);
}

Eigen::VectorXd lasso_cd(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         const LassoConfig& cfg, const Eigen::VectorXd* warm_start) {
  if (cfg.lambda < 0.0) throw std::invalid_argument("lasso: lambda must be nonnegative");
  const Eigen::Index N = design.rows();
  const Eigen::Index n = design.cols();
  if (response.size() != N) throw DimensionError("lasso: response length mismatch");
  if (N < 1) throw std::invalid_argument("lasso: need at least one observation");

  const double inv_n_obs = 1.0 / static_cast<double>(N);
  // per-coordinate second moments (1/N) sum_i phi_ij^2
  Eigen::VectorXd col_sq(n);
  for (Eigen::Index j = 0; j < n; ++j) col_sq(j) = design.col(j).squaredNorm() * inv_n_obs;

  Eigen::VectorXd x = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
  if (warm_start && warm_start->size() != n)
    throw DimensionError("lasso: warm start length mismatch");
  Eigen::VectorXd residual = response - design * x;

  for (long sweep = 0; sweep < cfg.max_iters; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (col_sq(j) <= 0.0) continue;  // degenerate coordinate stays put
      const double old = x(j);
      const double rho = design.col(j).dot(residual) * inv_n_obs + col_sq(j) * old;
      const double mag = std::abs(rho) - cfg.lambda;
      const double next = mag > 0.0 ? std::copysign(mag, rho) / col_sq(j) : 0.0;
      if (next != old) {
        residual -= (next - old) * design.col(j);
        x(j) = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    if (max_change <= cfg.tol * std::max(1.0, x.cwiseAbs().maxCoeff())) break;
  }
  return x;
}

VanillaSmdResult vanilla_smd(const StochasticOracle& oracle, const ProxSetup& setup,
                             long budget, StepsizeRule stepsize, RngStream& rng,
                             const StageObserver* observer) {
  if (budget < 1) throw std::invalid_argument("vanilla_smd: budget must be >= 1");
  StageConfig cfg;
  cfg.steps = budget;
  cfg.stepsize = stepsize;
  cfg.minibatch = 1;
  cfg.x0 = oracle.zero();

  VanillaSmdResult out;
  // record running error metrics on a geometric grid
  std::vector<long> grid;
  for (double v = 1.0; v < static_cast<double>(budget); v *= 1.25)
    grid.push_back(static_cast<long>(v));
  grid.push_back(budget);
  std::size_t next = 0;
  StageObserver recorder = [&](long calls, const StageAccum& acc) {
    if (observer) (*observer)(calls, acc);
    if (next < grid.size() && calls >= grid[next]) {
      while (next < grid.size() && calls >= grid[next]) ++next;
      RunTrace::Record rec;
      rec.oracle_calls = calls;
      rec.stage_id = 1;
      rec.phase = Phase::Asymptotic;
      rec.metrics = oracle.metrics(acc.average());
      out.trace.append(std::move(rec));
    }
  };
  StageResult r = run_stage(oracle, setup, cfg, rng, &recorder);
  out.estimate = std::move(r.average);
  return out;
}

}  // namespace sparsemd

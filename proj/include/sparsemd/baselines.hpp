#pragma once

#include "sparsemd/models.hpp"
#include "sparsemd/smd.hpp"
#include "sparsemd/trace.hpp"

namespace sparsemd {

struct LassoConfig {
  double lambda = 0.0;
  long max_iters = 30000;  // coordinate-descent sweeps
  double tol = 1e-8;       // relative coordinate-change tolerance
};

// lambda = 2 sigma sqrt(2 ln(n) / N).
double lambda_theory(double sigma, Eigen::Index n, long N);

// Cyclic coordinate descent with soft-thresholding on
//   (1/2N) sum_i (eta_i - phi_i' x)^2 + lambda ||x||_1,
// rows of `design` are the regressors. Zero-variance coordinates are skipped.
Eigen::VectorXd lasso_cd(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         const LassoConfig& cfg,
                         const Eigen::VectorXd* warm_start = nullptr);

struct VanillaSmdResult {
  Point estimate;
  RunTrace trace;
};

// Single-stage mirror descent over the whole budget; the comparison baseline.
VanillaSmdResult vanilla_smd(const StochasticOracle& oracle, const ProxSetup& setup,
                             long budget, StepsizeRule stepsize, RngStream& rng,
                             const StageObserver* observer = nullptr);

}  // namespace sparsemd

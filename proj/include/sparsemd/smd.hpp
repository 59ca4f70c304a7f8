#pragma once

#include <functional>
#include <vector>

#include "sparsemd/oracle.hpp"
#include "sparsemd/point.hpp"
#include "sparsemd/prox.hpp"

namespace sparsemd {

enum class StepsizeKind { Constant, PerSample };

struct StepsizeRule {
  StepsizeKind kind = StepsizeKind::Constant;
  double beta = 1.0;  // constant stepsize, or beta0 for the per-sample rule

  static StepsizeRule constant(double beta) {
    if (beta <= 0.0) throw std::invalid_argument("stepsize: beta must be positive");
    return {StepsizeKind::Constant, beta};
  }
  // beta_i = beta0 * ||phi_i||_inf^2 (squared spectral norm for matrices).
  static StepsizeRule per_sample(double beta0) {
    if (beta0 <= 0.0) throw std::invalid_argument("stepsize: beta0 must be positive");
    return {StepsizeKind::PerSample, beta0};
  }
};

struct StageConfig {
  long steps = 1;      // m >= 1
  StepsizeRule stepsize;
  long minibatch = 1;  // b >= 1; gradients are averaged, cost counts b calls
  Point x0;
};

struct StageResult {
  Point average;       // weighted average of the iterates
  Point last;          // x_m
  long oracle_calls;   // m * b
  double weight_sum;   // sum of 1/beta_i
};

// Running state handed to observers; materializing the average is the only
// nontrivial operation.
class StageAccum {
 public:
  StageAccum(Point x0) : last_(x0), weighted_sum_(Point::zeros_like(x0)) {}

  const Point& last() const { return last_; }
  double weight_sum() const { return weight_sum_; }
  long iterations() const { return iterations_; }
  Point average() const {
    if (weight_sum_ <= 0.0) return last_;
    return (1.0 / weight_sum_) * weighted_sum_;
  }

  void add(Point x, double beta) {
    const double w = 1.0 / beta;
    weighted_sum_ += w * x;
    weight_sum_ += w;
    last_ = std::move(x);
    ++iterations_;
  }

 private:
  Point last_;
  Point weighted_sum_;
  double weight_sum_ = 0.0;
  long iterations_ = 0;
};

using StageObserver = std::function<void(long oracle_calls_so_far, const StageAccum&)>;

// One run of the mirror-descent recursion
//   x_i = prox_map(g_i, x_{i-1}, x0, beta_{i-1}),
// where g_i averages `minibatch` fresh gradients at x_{i-1}, followed by the
// weighted averaging with weights 1/beta_{i-1}. The Bregman divergence stays
// anchored at the stage's x0 throughout.
StageResult run_stage(const StochasticOracle& oracle, const ProxSetup& setup,
                      const StageConfig& cfg, RngStream& rng,
                      const StageObserver* observer = nullptr);

// Normalized averaging weights w_i = beta_{i-1}^{-1} / sum_j beta_{j-1}^{-1}.
std::vector<double> averaging_weights(const std::vector<double>& betas);

}  // namespace sparsemd

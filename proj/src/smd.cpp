#include "sparsemd/smd.hpp"

#include <string>

namespace sparsemd {

StageResult run_stage(const StochasticOracle& oracle, const ProxSetup& setup,
                      const StageConfig& cfg, RngStream& rng, const StageObserver* observer) {
  if (cfg.steps < 1) throw std::invalid_argument("run_stage: steps must be >= 1");
  if (cfg.minibatch < 1) throw std::invalid_argument("run_stage: minibatch must be >= 1");

  const bool per_sample = cfg.stepsize.kind == StepsizeKind::PerSample;
  Point x = cfg.x0;
  StageAccum accum(cfg.x0);
  long calls = 0;

  for (long i = 0; i < cfg.steps; ++i) {
    GradientSample first = oracle.sample_gradient(x, rng, per_sample);
    Point grad = std::move(first.gradient);
    double scale_sum = first.step_scale;
    calls += first.sample_cost;
    for (long b = 1; b < cfg.minibatch; ++b) {
      GradientSample s = oracle.sample_gradient(x, rng, per_sample);
      grad += s.gradient;
      scale_sum += s.step_scale;
      calls += s.sample_cost;
    }
    if (cfg.minibatch > 1) grad *= 1.0 / static_cast<double>(cfg.minibatch);

    double beta = cfg.stepsize.beta;
    if (per_sample)
      beta = std::max(cfg.stepsize.beta * scale_sum / static_cast<double>(cfg.minibatch), 1e-12);

    Point next = prox_map(setup, grad, x, cfg.x0, beta);
    if (!next.all_finite())
      throw NumericError("run_stage: non-finite iterate at step " + std::to_string(i + 1), 0.0,
                         i + 1);
    accum.add(std::move(next), beta);
    x = accum.last();
    if (observer) (*observer)(calls, accum);
  }

  return {accum.average(), accum.last(), calls, accum.weight_sum()};
}

std::vector<double> averaging_weights(const std::vector<double>& betas) {
  double inv_sum = 0.0;
  for (double b : betas) {
    if (b <= 0.0) throw std::invalid_argument("averaging_weights: betas must be positive");
    inv_sum += 1.0 / b;
  }
  std::vector<double> w(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) w[i] = (1.0 / betas[i]) / inv_sum;
  return w;
}

}  // namespace sparsemd

#include "sparsemd/smd_sr.hpp"

#include <cmath>
#include <string>

namespace sparsemd {

PreliminarySchedule preliminary_schedule(const AlgoConstants& c) {
  c.validate();
  PreliminarySchedule s;
  s.beta0 = 2.0 * c.varkappa * c.nu;
  const double m0 = 16.0 / c.lowkap * static_cast<double>(c.s_bar) *
                    (8.0 * c.theta * c.varkappa + 1.0) * c.nu;
  if (m0 > 9e18) throw std::overflow_error("preliminary schedule: m0 overflows");
  s.m0 = static_cast<long>(std::ceil(m0));
  if (c.sigma_star_sq == 0.0) {
    s.k_bar_infinite = true;
    return s;
  }
  const double arg = c.radius * c.radius * c.lowkap * c.nu * c.varkappa /
                     (32.0 * c.sigma_star_sq * static_cast<double>(c.s_bar) * c.varkappa_prime);
  s.k_bar = arg <= 1.0 ? 0 : static_cast<long>(std::ceil(std::log2(arg)));
  return s;
}

AsymptoticStage asymptotic_schedule(const AlgoConstants& c, int k) {
  c.validate();
  if (k < 1) throw std::invalid_argument("asymptotic schedule: k must be >= 1");
  if (k > 60) throw std::overflow_error("asymptotic schedule: 2^k overflows for k > 60");
  const double two_k = std::ldexp(1.0, k);
  AsymptoticStage s;
  s.beta = two_k * c.nu * c.varkappa;
  const double m = 512.0 * static_cast<double>(c.s_bar) * c.theta * c.nu * c.varkappa /
                   c.lowkap * two_k;
  if (m > 9e18) throw std::overflow_error("asymptotic schedule: stage length overflows");
  s.steps = static_cast<long>(std::ceil(m));
  return s;
}

bool cusum_switch(const std::vector<double>& stage_errors, const CusumConfig& cfg) {
  if (cfg.threshold <= 0.0) throw std::invalid_argument("cusum: threshold must be positive");
  for (double p : stage_errors)
    if (!(p > 0.0)) throw std::invalid_argument("cusum: stage error proxies must be positive");
  if (stage_errors.size() < 2) return false;

  // In the contracting regime the proxy halves in squared norm per stage, so
  // log-differences center at -ln(sqrt 2); a flattening trend accumulates.
  const double center = 0.5 * std::log(2.0);
  double s = 0.0;
  for (std::size_t k = 1; k < stage_errors.size(); ++k) {
    const double d = std::log(stage_errors[k]) - std::log(stage_errors[k - 1]) + center;
    s = std::max(0.0, s + d - cfg.drift_guard);
    if (s > cfg.threshold) return true;
  }
  return false;
}

namespace {

struct StageDriver {
  const StochasticOracle& oracle;
  const ProxSetup& setup;
  const SparsityStructure& structure;
  RngStream& rng;
  const RunObserver* observer;
  RunTrace trace;
  long calls = 0;
  int stage_id = 0;

  StageResult run(Phase phase, const Point& center, long steps, StepsizeRule rule,
                  long minibatch) {
    ++stage_id;
    StageConfig cfg;
    cfg.steps = steps;
    cfg.stepsize = rule;
    cfg.minibatch = minibatch;
    cfg.x0 = center;

    StageObserver inner;
    const StageObserver* inner_ptr = nullptr;
    if (observer) {
      RunContext ctx{stage_id, phase};
      const long base = calls;
      inner = [this, ctx, base](long stage_calls, const StageAccum& acc) {
        (*observer)(ctx, base + stage_calls, acc);
      };
      inner_ptr = &inner;
    }
    StageResult r = run_stage(oracle, setup, cfg, rng, inner_ptr);
    calls += r.oracle_calls;
    return r;
  }

  void record(Phase phase, const Point& y, double movement) {
    RunTrace::Record rec;
    rec.oracle_calls = calls;
    rec.stage_id = stage_id;
    rec.phase = phase;
    rec.metrics = oracle.metrics(y);
    if (movement >= 0.0) rec.metrics["stage_movement"] = movement;
    trace.append(std::move(rec));
  }
};

SmdSrResult run_theoretical(StageDriver& d, const SmdSrConfig& cfg) {
  const PreliminarySchedule pre = preliminary_schedule(cfg.constants);
  const long budget = cfg.total_budget;
  if (budget < pre.m0)
    throw std::invalid_argument("smd_sr: budget " + std::to_string(budget) +
                                " is below one preliminary stage m0 = " + std::to_string(pre.m0));

  const long stages_affordable = budget / pre.m0;
  const long k_prelim =
      pre.k_bar_infinite ? stages_affordable : std::min(stages_affordable, pre.k_bar);

  Point y = cfg.x0;
  Point x_hat = cfg.x0;
  const StepsizeRule rule = StepsizeRule::constant(pre.beta0);
  for (long k = 0; k < k_prelim; ++k) {
    StageResult r = d.run(Phase::Preliminary, y, pre.m0, rule, 1);
    Point y_next = sparsify_point(d.structure, r.average);
    const double movement = (y_next - y).l2();
    x_hat = std::move(r.average);
    y = std::move(y_next);
    d.record(Phase::Preliminary, y, movement);
  }

  // The asymptotic phase only starts once the preliminary phase ran to its
  // full planned length; a budget-truncated preliminary phase ends the run.
  if (pre.k_bar_infinite || k_prelim < pre.k_bar)
    return {x_hat, y, std::move(d.trace)};

  const long m_budget = budget - pre.m0 * pre.k_bar;
  long spent = 0;
  for (int k = 1;; ++k) {
    const AsymptoticStage st = asymptotic_schedule(cfg.constants, k);
    if (spent + st.steps > m_budget) break;
    StageResult r = d.run(Phase::Asymptotic, y, st.steps, StepsizeRule::constant(st.beta), 1);
    spent += st.steps;
    Point y_next = sparsify_point(d.structure, r.average);
    const double movement = (y_next - y).l2();
    x_hat = std::move(r.average);
    y = std::move(y_next);
    d.record(Phase::Asymptotic, y, movement);
  }
  return {x_hat, y, std::move(d.trace)};
}

SmdSrResult run_practical(StageDriver& d, const SmdSrConfig& cfg) {
  const AlgoConstants& c = cfg.constants;
  const Eigen::Index ambient = cfg.x0.is_matrix() ? 2 * cfg.x0.cols() : cfg.x0.size();
  long m0 = cfg.practical.m0_override.value_or(static_cast<long>(
      std::ceil(0.5 * static_cast<double>(c.s_bar) * c.nu *
                (std::log(static_cast<double>(ambient)) + 1.0))));
  m0 = std::max<long>(m0, 1);
  const long budget = cfg.total_budget;
  if (budget < m0)
    throw std::invalid_argument("smd_sr: budget " + std::to_string(budget) +
                                " is below one practical stage m0 = " + std::to_string(m0));

  const StepsizeRule rule = StepsizeRule::per_sample(cfg.practical.beta0);
  Point y = cfg.x0;
  Point x_hat = cfg.x0;
  std::vector<double> proxies;
  int prelim_stages = 0;

  while (d.calls + m0 <= budget) {
    StageResult r = d.run(Phase::Preliminary, y, m0, rule, 1);
    Point y_next = sparsify_point(d.structure, r.average);
    const double movement = (y_next - y).l2();
    x_hat = std::move(r.average);
    y = std::move(y_next);
    ++prelim_stages;
    proxies.push_back(std::max(movement, 1e-15 * (1.0 + y.l2())));
    d.record(Phase::Preliminary, y, movement);
    if (prelim_stages >= cfg.practical.min_prelim_stages &&
        cusum_switch(proxies, cfg.practical.cusum))
      break;
  }

  // Fixed-length stages with geometrically growing minibatches.
  for (int k = 1;; ++k) {
    const double growth = std::pow(cfg.practical.minibatch_growth, k);
    if (growth > 1e15) break;
    const long batch = static_cast<long>(std::ceil(growth));
    if (d.calls + m0 * batch > budget) break;
    StageResult r = d.run(Phase::Asymptotic, y, m0, rule, batch);
    Point y_next = sparsify_point(d.structure, r.average);
    const double movement = (y_next - y).l2();
    x_hat = std::move(r.average);
    y = std::move(y_next);
    d.record(Phase::Asymptotic, y, movement);
  }
  return {x_hat, y, std::move(d.trace)};
}

}  // namespace

SmdSrResult run_smd_sr(const StochasticOracle& oracle, const ProxSetup& setup,
                       const SparsityStructure& structure, const SmdSrConfig& cfg,
                       RngStream& rng, const RunObserver* observer) {
  if (cfg.total_budget < 1) throw std::invalid_argument("smd_sr: budget must be >= 1");
  StageDriver driver{oracle, setup, structure, rng, observer};
  if (cfg.mode == SmdSrMode::Theoretical) return run_theoretical(driver, cfg);
  return run_practical(driver, cfg);
}

}  // namespace sparsemd

#pragma once

#include <optional>

#include "sparsemd/constants.hpp"
#include "sparsemd/oracle.hpp"
#include "sparsemd/smd.hpp"
#include "sparsemd/sparsify.hpp"
#include "sparsemd/trace.hpp"

namespace sparsemd {

enum class CusumStatistic { LogErrorProxy };

// CUSUM detector over successive log-differences of the stage movement proxy,
// centered at the expected decrement of the contracting regime.
struct CusumConfig {
  double threshold = 2.0;    // h
  double drift_guard = 0.1;
  CusumStatistic statistic = CusumStatistic::LogErrorProxy;
};

struct PracticalConfig {
  double beta0 = 1.0;                 // per-sample stepsize multiplier
  std::optional<long> m0_override;    // stage length override
  int min_prelim_stages = 4;
  CusumConfig cusum;
  double minibatch_growth = 2.0;      // asymptotic minibatch factor per stage
};

enum class SmdSrMode { Theoretical, Practical };

struct SmdSrConfig {
  AlgoConstants constants;
  long total_budget = 0;  // N
  SmdSrMode mode = SmdSrMode::Theoretical;
  PracticalConfig practical;
  Point x0;
};

struct PreliminarySchedule {
  double beta0 = 0.0;
  long m0 = 0;
  long k_bar = 0;          // meaningful only when !k_bar_infinite
  bool k_bar_infinite = false;  // noiseless case: contract until budget runs out
};

PreliminarySchedule preliminary_schedule(const AlgoConstants& c);

struct AsymptoticStage {
  double beta = 0.0;
  long steps = 0;
};

AsymptoticStage asymptotic_schedule(const AlgoConstants& c, int k);

// True once the cumulative statistic over the stage-error proxies exceeds the
// threshold; needs at least two proxies.
bool cusum_switch(const std::vector<double>& stage_errors, const CusumConfig& cfg);

struct SmdSrResult {
  Point x_hat;  // last stage average, before sparsification
  Point y_hat;  // sparsified
  RunTrace trace;
};

// Observer over the whole multistage run; called per inner iteration with
// cumulative oracle calls across stages.
struct RunContext {
  int stage_id = 0;
  Phase phase = Phase::Preliminary;
};
using RunObserver = std::function<void(const RunContext&, long cumulative_calls,
                                       const StageAccum&)>;

SmdSrResult run_smd_sr(const StochasticOracle& oracle, const ProxSetup& setup,
                       const SparsityStructure& structure, const SmdSrConfig& cfg,
                       RngStream& rng, const RunObserver* observer = nullptr);

}  // namespace sparsemd

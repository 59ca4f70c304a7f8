#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsemd/models.hpp"
#include "sparsemd/reliability.hpp"
#include "sparsemd/smd_sr.hpp"

namespace sparsemd {

struct ModelSpec {
  std::string family = "glr";  // "glr" | "trace"
  Eigen::Index n = 100;
  long s = 5;
  Eigen::Index p = 0, q = 0;  // trace shapes
  double kappa_sigma = 1.0;
  double nu = 1.0;
  double sigma = 0.1;
  RegressorKind regressors = RegressorKind::Gaussian;
  int regressor_dof = 5;
  NoiseKind noise = NoiseKind::Gaussian;
};

struct AlgorithmSpec {
  std::string name = "smdsr";  // "smdsr" | "smd" | "lasso"
  SmdSrMode mode = SmdSrMode::Practical;
  std::optional<Selector> reliability;
  bool aggregate = false;
  double epsilon = 0.1;
  std::string label() const;
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<AlgorithmSpec> algorithms;
  long budget = 10000;
  int replications = 20;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int checkpoints = 100;
  double constant_multiplier = 1.0;

  // Parses a JSON document; EXPERIMENT_SEED and OUTPUT_DIR environment
  // variables override the corresponding fields.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  void validate() const;
};

struct ExperimentOutputs {
  std::vector<std::string> trace_files;
  std::string summary_file;
};

ExperimentOutputs run_experiment(const ExperimentConfig& config);

// Desk-scale replications of the benchmark figures; emits long-format
// summary CSVs (algorithm, combo, oracle_calls, median, q25, q75) plus a
// metadata file recording the scaled instance.
ExperimentOutputs replicate_figure(const std::string& which, double scale,
                                   const std::string& output_dir, std::uint64_t seed = 1,
                                   int replications = 20);

// Type-7 quantile (linear interpolation) of unsorted values, q in [0, 1].
double quantile_type7(std::vector<double> values, double q);

// Geometric grid of ~count oracle-call checkpoints in [1, budget].
std::vector<long> checkpoint_grid(long budget, int count);

}  // namespace sparsemd

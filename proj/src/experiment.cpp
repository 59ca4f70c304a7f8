#include "sparsemd/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "sparsemd/baselines.hpp"
#include "sparsemd/metrics.hpp"

namespace sparsemd {

namespace fs = std::filesystem;
using nlohmann::json;

double quantile_type7(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

std::vector<long> checkpoint_grid(long budget, int count) {
  if (budget < 1) throw std::invalid_argument("checkpoint grid: budget must be >= 1");
  if (count < 2) count = 2;
  std::vector<long> grid;
  const double lb = std::log(static_cast<double>(budget));
  for (int k = 0; k < count; ++k) {
    const auto v = static_cast<long>(std::llround(std::exp(lb * k / (count - 1))));
    if (grid.empty() || v > grid.back()) grid.push_back(std::max<long>(1, v));
  }
  if (grid.back() != budget) grid.push_back(budget);
  return grid;
}

std::string AlgorithmSpec::label() const {
  if (name == "smd") return "smd";
  if (name == "lasso") return "lasso";
  std::string base = mode == SmdSrMode::Theoretical ? "smdsr-theoretical" : "smdsr-practical";
  if (aggregate) return base + "-aggregated";
  if (reliability) {
    switch (*reliability) {
      case Selector::GeoMedian: return base + "-geomedian";
      case Selector::Medoid: return base + "-medoid";
      case Selector::OrderStat: return base + "-orderstat";
    }
  }
  return base;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

RegressorKind parse_regressors(const std::string& s) {
  if (s == "gaussian") return RegressorKind::Gaussian;
  if (s == "student_t") return RegressorKind::StudentT;
  if (s == "rademacher") return RegressorKind::RademacherScaled;
  if (s == "scale_mixture") return RegressorKind::GaussianScaleMixture;
  throw std::invalid_argument("config: unknown regressor family '" + s + "'");
}

NoiseKind parse_noise(const std::string& s) {
  if (s == "gaussian") return NoiseKind::Gaussian;
  if (s == "student_t4") return NoiseKind::StudentT4;
  throw std::invalid_argument("config: unknown noise family '" + s + "'");
}

Selector parse_selector(const std::string& s) {
  if (s == "geomedian") return Selector::GeoMedian;
  if (s == "medoid") return Selector::Medoid;
  if (s == "orderstat") return Selector::OrderStat;
  throw std::invalid_argument("config: unknown reliability selector '" + s + "'");
}

struct Row {
  int run_id = 0;
  long oracle_calls = 0;
  int stage = 0;
  Phase phase = Phase::Asymptotic;
  std::map<std::string, double> metrics;
};

struct RunSet {
  std::string algorithm;
  std::vector<Row> rows;       // all replications, ordered by (run_id, calls)
  std::vector<std::string> failures;
};

// A concrete synthetic instance with everything the algorithms need.
struct Instance {
  std::unique_ptr<GlrModel> glr;
  std::unique_ptr<TraceModel> trace;
  SparsityStructure structure = SparsityStructure::vanilla(1, 1);
  ProxSetup setup;
  AlgoConstants constants;
  Point x0;

  const StochasticOracle& oracle() const {
    if (glr) return *glr;
    return *trace;
  }
};

Instance make_instance(const ModelSpec& spec, double multiplier, RngStream stream) {
  Instance inst;
  if (spec.family == "glr") {
    inst.glr = std::make_unique<GlrModel>(make_paper_instance(
        spec.n, spec.s, spec.kappa_sigma, spec.nu, spec.sigma, spec.regressors, spec.noise,
        stream, spec.regressor_dof));
    inst.setup = ProxSetup::l1_power(spec.n);
    inst.structure = SparsityStructure::vanilla(spec.n, spec.s);
    inst.x0 = inst.glr->zero();
    const double radius = std::max(1e-12, inst.glr->x_star().lpNorm<1>());
    inst.constants = suggest_constants(*inst.glr, inst.setup, radius, multiplier);
    inst.constants.s_bar = spec.s;
  } else if (spec.family == "trace") {
    const Eigen::Index p = spec.p > 0 ? spec.p : spec.n;
    const Eigen::Index q = spec.q > 0 ? spec.q : spec.n;
    Eigen::MatrixXd x_star = make_low_rank_matrix(p, q, spec.s, stream);
    const MatrixRegressorKind kind = spec.regressors == RegressorKind::RademacherScaled
                                         ? MatrixRegressorKind::RademacherIID
                                         : MatrixRegressorKind::GaussianIID;
    inst.trace = std::make_unique<TraceModel>(std::move(x_star), spec.sigma, kind, spec.noise);
    inst.setup = ProxSetup::nuclear(p, q);
    inst.structure = SparsityStructure::low_rank(p, q, spec.s);
    inst.x0 = inst.trace->zero();
    const double radius =
        std::max(1e-12, norm_eval(Point::matrix(inst.trace->x_star()), Norm::Nuclear));
    inst.constants = suggest_constants(*inst.trace, inst.setup, radius, multiplier);
    inst.constants.s_bar = spec.s;
  } else {
    throw std::invalid_argument("config: unknown model family '" + spec.family + "'");
  }
  return inst;
}

// Observer that snapshots error metrics whenever the call count crosses the
// next grid value; every grid point up to the consumed budget gets one row.
struct GridRecorder {
  const std::vector<long>& grid;
  const StochasticOracle& oracle;
  int run_id;
  std::vector<Row>& rows;
  std::size_t next = 0;

  void observe(int stage, Phase phase, long calls, const StageAccum& acc) {
    if (next >= grid.size() || calls < grid[next]) return;
    const Point estimate = acc.average();
    auto metrics = oracle.metrics(estimate);
    while (next < grid.size() && calls >= grid[next]) {
      rows.push_back({run_id, grid[next], stage, phase, metrics});
      ++next;
    }
  }

  // Emit the remaining checkpoints with the final estimate so the grid is
  // complete for every run.
  void flush(int stage, Phase phase, const Point& final_estimate) {
    if (next >= grid.size()) return;
    auto metrics = oracle.metrics(final_estimate);
    for (; next < grid.size(); ++next)
      rows.push_back({run_id, grid[next], stage, phase, metrics});
  }
};

AggregationConfig suggest_aggregation(const Instance& inst, long replica_budget, long second_sample,
                                      double epsilon) {
  AggregationConfig cfg;
  cfg.epsilon = epsilon;
  cfg.groups = static_cast<int>(std::ceil(7.0 * std::log(2.0 / epsilon)));
  cfg.group_size = std::max<long>(1, second_sample / cfg.groups);
  cfg.sigma_star = std::sqrt(inst.constants.sigma_star_sq);
  cfg.tau_m = aggregation_tau_m(inst.constants, replica_budget);
  if (inst.glr) {
    const double upsilon = inst.glr->sigma_diag().maxCoeff();
    const double u_hi = inst.glr->activation().u_hi;
    const double u_lo = inst.glr->activation().u_lo;
    cfg.lipschitz_l2 = u_hi * upsilon;  // spectral norm of the diagonal covariance
    cfg.chi = 16.0 * u_hi / u_lo;
    // chi' ties the Euclidean noise floor sigma^2 * sigma_1(Sigma) to sigma_*^2
    cfg.chi_prime = inst.constants.sigma_star_sq > 0.0
                        ? upsilon * inst.glr->noise_sigma() * inst.glr->noise_sigma() /
                              inst.constants.sigma_star_sq
                        : 1.0;
  } else {
    cfg.lipschitz_l2 = 1.0;
    cfg.chi = 16.0;
    cfg.chi_prime = 1.0;
  }
  return cfg;
}

void run_single(const ExperimentConfig& config, const AlgorithmSpec& algo, int rep,
                const std::vector<long>& grid, std::vector<Row>& rows) {
  RngStream root(config.seed, 0);
  Instance inst = make_instance(config.model, config.constant_multiplier,
                                root.substream(2 * static_cast<std::uint64_t>(rep)));
  RngStream run_stream = root.substream(2 * static_cast<std::uint64_t>(rep) + 1)
                             .substream(std::hash<std::string>{}(algo.label()));

  const StochasticOracle& oracle = inst.oracle();
  GridRecorder recorder{grid, oracle, rep, rows};

  if (algo.name == "smd") {
    StageObserver obs = [&](long calls, const StageAccum& acc) {
      recorder.observe(1, Phase::Asymptotic, calls, acc);
    };
    VanillaSmdResult r = vanilla_smd(oracle, inst.setup, config.budget,
                                     StepsizeRule::per_sample(1.0), run_stream, &obs);
    recorder.flush(1, Phase::Asymptotic, r.estimate);
    return;
  }

  if (algo.name == "lasso") {
    if (!inst.glr) throw std::invalid_argument("lasso baseline requires the glr family");
    const Eigen::Index n = inst.glr->dim();
    Eigen::MatrixXd design(config.budget, n);
    Eigen::VectorXd response(config.budget);
    for (long i = 0; i < config.budget; ++i) {
      Observation obs = inst.glr->sample_observation(run_stream);
      design.row(i) = obs.regressor.flat().transpose();
      response(i) = obs.response;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    int stage = 0;
    for (long t : grid) {
      LassoConfig lcfg;
      lcfg.lambda = lambda_theory(inst.glr->noise_sigma(), n, t);
      x = lasso_cd(design.topRows(t), response.head(t), lcfg, &x);
      ++stage;
      rows.push_back({rep, t, stage, Phase::Asymptotic,
                      risk_metrics(Point::vector(x), *oracle.optimum(), &oracle)});
    }
    return;
  }

  // smdsr and its reliability variants
  SmdSrConfig cfg;
  cfg.constants = inst.constants;
  cfg.total_budget = config.budget;
  cfg.mode = algo.mode;
  cfg.x0 = inst.x0;

  if (algo.aggregate) {
    SmdSrConfig first = cfg;
    first.total_budget = config.budget / 2;
    RngStream agg_stream = run_stream.substream(7);
    ReliableRunResult rel = reliable_run(oracle, inst.setup, inst.structure, first,
                                         algo.epsilon, Selector::OrderStat, run_stream);
    const long replica_budget = rel.replicas.budgets.empty() ? first.total_budget
                                                             : rel.replicas.budgets[0];
    AggregationConfig agg =
        suggest_aggregation(inst, replica_budget, config.budget - first.total_budget,
                            algo.epsilon);
    auto [idx, point] = aggregate_select(rel.replicas, oracle, agg, agg_stream);
    Row row{rep, config.budget, static_cast<int>(rel.replicas.size()), Phase::Asymptotic,
            oracle.metrics(point)};
    rows.push_back(std::move(row));
    return;
  }

  if (algo.reliability) {
    ReliableRunResult rel = reliable_run(oracle, inst.setup, inst.structure, cfg, algo.epsilon,
                                         *algo.reliability, run_stream);
    for (const auto& rec : rel.trace.records())
      rows.push_back({rep, rec.oracle_calls, rec.stage_id, rec.phase, rec.metrics});
    Row final_row{rep, config.budget, static_cast<int>(rel.replicas.size()) + 1,
                  Phase::Asymptotic, oracle.metrics(rel.y_bar)};
    if (rows.empty() || rows.back().oracle_calls < config.budget)
      rows.push_back(std::move(final_row));
    return;
  }

  RunObserver obs = [&](const RunContext& ctx, long calls, const StageAccum& acc) {
    recorder.observe(ctx.stage_id, ctx.phase, calls, acc);
  };
  SmdSrResult r = run_smd_sr(oracle, inst.setup, inst.structure, cfg, run_stream, &obs);
  const int last_stage = r.trace.empty() ? 1 : r.trace.back().stage_id;
  const Phase last_phase = r.trace.empty() ? Phase::Preliminary : r.trace.back().phase;
  recorder.flush(last_stage, last_phase, r.x_hat);
}

std::vector<RunSet> execute(const ExperimentConfig& config) {
  config.validate();
  const std::vector<long> grid = checkpoint_grid(config.budget, config.checkpoints);
  std::vector<RunSet> out(config.algorithms.size());
  for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    out[a].algorithm = config.algorithms[a].label();

  struct Task {
    std::size_t algo;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    for (int r = 0; r < config.replications; ++r) tasks.push_back({a, r});

  std::vector<std::vector<Row>> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> cursor{0};
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(),
                            static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          run_single(config, config.algorithms[tasks[i].algo], tasks[i].rep, grid, rows[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    RunSet& set = out[tasks[i].algo];
    if (!errors[i].empty()) {
      set.failures.push_back("run " + std::to_string(tasks[i].rep) + ": " + errors[i]);
      continue;
    }
    for (auto& r : rows[i]) set.rows.push_back(std::move(r));
  }
  return out;
}

const char* const kTraceHeader =
    "run_id,oracle_calls,stage,phase,l2_error,struct_error,sigma_error,objective_gap";

std::string metric_field(const std::map<std::string, double>& m, const char* key) {
  const auto it = m.find(key);
  return it == m.end() ? std::string() : fmt(it->second);
}

void write_trace_csv(const std::string& path, const RunSet& set) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << kTraceHeader << "\n";
  for (const Row& r : set.rows) {
    f << r.run_id << ',' << r.oracle_calls << ',' << r.stage << ',' << phase_name(r.phase)
      << ',' << metric_field(r.metrics, "l2_error") << ','
      << metric_field(r.metrics, "struct_error") << ','
      << metric_field(r.metrics, "sigma_error") << ','
      << metric_field(r.metrics, "objective_gap") << "\n";
  }
}

struct SummaryRow {
  std::string algorithm;
  std::string combo;
  long oracle_calls = 0;
  double median = 0.0, q25 = 0.0, q75 = 0.0;
};

std::vector<SummaryRow> summarize(const RunSet& set, const std::string& combo,
                                  const char* metric = "sigma_error") {
  std::map<long, std::vector<double>> by_checkpoint;
  for (const Row& r : set.rows) {
    const auto it = r.metrics.find(metric);
    if (it != r.metrics.end()) by_checkpoint[r.oracle_calls].push_back(it->second);
  }
  std::vector<SummaryRow> out;
  for (const auto& [calls, vals] : by_checkpoint) {
    SummaryRow s;
    s.algorithm = set.algorithm;
    s.combo = combo;
    s.oracle_calls = calls;
    s.median = quantile_type7(vals, 0.5);
    s.q25 = quantile_type7(vals, 0.25);
    s.q75 = quantile_type7(vals, 0.75);
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows,
                       bool with_combo) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << (with_combo ? "algorithm,combo,oracle_calls,median,q25,q75"
                   : "algorithm,oracle_calls,median,q25,q75")
    << "\n";
  for (const auto& r : rows) {
    f << r.algorithm << ',';
    if (with_combo) f << r.combo << ',';
    f << r.oracle_calls << ',' << fmt(r.median) << ',' << fmt(r.q25) << ',' << fmt(r.q75)
      << "\n";
  }
}

void write_failures(const std::string& dir, const std::vector<RunSet>& sets) {
  std::vector<std::string> lines;
  for (const auto& s : sets)
    for (const auto& f : s.failures) lines.push_back(s.algorithm + ": " + f);
  if (lines.empty()) return;
  std::ofstream f(dir + "/failures.log", std::ios::binary);
  for (const auto& l : lines) f << l << "\n";
}

long practical_stage_length(Eigen::Index n, long s, double nu) {
  return static_cast<long>(
      std::ceil(0.5 * static_cast<double>(s) * nu * (std::log(static_cast<double>(n)) + 1.0)));
}

}  // namespace

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  if (budget < 1) bad.push_back("budget must be >= 1");
  if (replications < 1) bad.push_back("replications must be >= 1");
  if (algorithms.empty()) bad.push_back("algorithms list is empty");
  if (model.family != "glr" && model.family != "trace")
    bad.push_back("model.family must be 'glr' or 'trace'");
  if (model.s < 1) bad.push_back("model.s must be >= 1");
  if (model.family == "glr" && model.s > model.n) bad.push_back("model.s must be <= n");
  if (!(model.kappa_sigma > 0.0)) bad.push_back("model.kappa_sigma must be positive");
  if (model.nu < model.kappa_sigma) bad.push_back("model.nu must be >= kappa_sigma");
  if (model.sigma < 0.0) bad.push_back("model.sigma must be nonnegative");
  for (const auto& a : algorithms) {
    if (a.name != "smdsr" && a.name != "smd" && a.name != "lasso")
      bad.push_back("unknown algorithm '" + a.name + "'");
    if ((a.reliability || a.aggregate) && (!(a.epsilon > 0.0) || a.epsilon > 0.5))
      bad.push_back("epsilon must lie in (0, 1/2] for " + a.label());
  }
  if (!bad.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw std::invalid_argument(msg);
  }
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentConfig cfg;
  const json& m = doc.at("model");
  cfg.model.family = m.value("family", "glr");
  cfg.model.n = m.value("n", 100);
  cfg.model.s = m.value("s", 5);
  cfg.model.p = m.value("p", 0);
  cfg.model.q = m.value("q", 0);
  cfg.model.kappa_sigma = m.value("kappa_sigma", 1.0);
  cfg.model.nu = m.value("nu", 1.0);
  cfg.model.sigma = m.value("sigma", 0.1);
  cfg.model.regressors = parse_regressors(m.value("regressors", "gaussian"));
  cfg.model.regressor_dof = m.value("regressor_dof", 5);
  cfg.model.noise = parse_noise(m.value("noise", "gaussian"));

  cfg.algorithms.clear();
  for (const json& a : doc.at("algorithms")) {
    AlgorithmSpec spec;
    spec.name = a.value("name", "smdsr");
    const std::string mode = a.value("mode", "practical");
    spec.mode = mode == "theoretical" ? SmdSrMode::Theoretical : SmdSrMode::Practical;
    if (a.contains("reliability")) spec.reliability = parse_selector(a.at("reliability"));
    spec.aggregate = a.value("aggregate", false);
    spec.epsilon = a.value("epsilon", 0.1);
    cfg.algorithms.push_back(std::move(spec));
  }

  cfg.budget = doc.value("budget", 10000);
  cfg.replications = doc.value("replications", 20);
  cfg.seed = doc.value("seed", 1ULL);
  cfg.output_dir = doc.value("output_dir", "out");
  cfg.checkpoints = doc.value("checkpoints", 100);
  cfg.constant_multiplier = doc.value("constant_multiplier", 1.0);

  if (const char* env_seed = std::getenv("EXPERIMENT_SEED"))
    cfg.seed = std::strtoull(env_seed, nullptr, 10);
  if (const char* env_dir = std::getenv("OUTPUT_DIR")) cfg.output_dir = env_dir;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

ExperimentOutputs run_experiment(const ExperimentConfig& config) {
  const std::vector<RunSet> sets = execute(config);
  fs::create_directories(config.output_dir);

  ExperimentOutputs out;
  std::vector<SummaryRow> summary;
  for (const auto& set : sets) {
    const std::string path = config.output_dir + "/trace_" + set.algorithm + ".csv";
    write_trace_csv(path, set);
    out.trace_files.push_back(path);
    auto rows = summarize(set, "");
    summary.insert(summary.end(), rows.begin(), rows.end());
  }
  out.summary_file = config.output_dir + "/summary.csv";
  write_summary_csv(out.summary_file, summary, false);
  write_failures(config.output_dir, sets);
  return out;
}

ExperimentOutputs replicate_figure(const std::string& which, double scale,
                                   const std::string& output_dir, std::uint64_t seed,
                                   int replications) {
  if (!(scale > 0.0) || scale > 1.0)
    throw std::invalid_argument("replicate_figure: scale must lie in (0, 1]");
  if (scale > 0.5)
    std::fprintf(stderr,
                 "replicate_figure: scale %.2f approaches the full-size instance; "
                 "expect long runtimes and high memory use\n",
                 scale);
  fs::create_directories(output_dir);

  ExperimentOutputs out;
  std::vector<SummaryRow> summary;
  json meta;
  meta["figure"] = which;
  meta["scale"] = scale;
  meta["seed"] = seed;
  meta["replications"] = replications;

  auto base_config = [&](Eigen::Index n, long s, double kappa_sigma, double sigma,
                         NoiseKind noise, long budget, int checkpoints) {
    ExperimentConfig cfg;
    cfg.model.family = "glr";
    cfg.model.n = n;
    cfg.model.s = s;
    cfg.model.kappa_sigma = kappa_sigma;
    cfg.model.nu = 1.0;
    cfg.model.sigma = sigma;
    cfg.model.noise = noise;
    cfg.budget = budget;
    cfg.replications = replications;
    cfg.seed = seed;
    cfg.checkpoints = checkpoints;
    cfg.output_dir = output_dir;
    return cfg;
  };

  if (which == "fig1" || which == "fig3") {
    const auto n = static_cast<Eigen::Index>(std::llround(100000.0 * scale));
    const Eigen::Index n_eff = std::max<Eigen::Index>(n, 50);
    const long s = std::min<long>(50, n_eff / 10);
    const NoiseKind noise = which == "fig3" ? NoiseKind::StudentT4 : NoiseKind::Gaussian;
    const long budget = 96 * practical_stage_length(n_eff, s, 1.0);
    meta["n"] = n_eff;
    meta["s"] = s;
    meta["budget"] = budget;
    for (const double kappa_sigma : {0.1, 1.0}) {
      for (const double sigma : {0.001, 0.1}) {
        ExperimentConfig cfg = base_config(n_eff, s, kappa_sigma, sigma, noise, budget, 60);
        cfg.algorithms = {AlgorithmSpec{"smdsr", SmdSrMode::Practical, std::nullopt, false, 0.1},
                          AlgorithmSpec{"smd", SmdSrMode::Practical, std::nullopt, false, 0.1}};
        const std::string combo =
            "ks" + fmt(kappa_sigma) + "_sigma" + fmt(sigma);
        for (const auto& set : execute(cfg)) {
          auto rows = summarize(set, combo);
          summary.insert(summary.end(), rows.begin(), rows.end());
        }
      }
    }
  } else if (which == "fig2") {
    const auto n = static_cast<Eigen::Index>(std::llround(50000.0 * scale));
    const Eigen::Index n_eff = std::max<Eigen::Index>(n, 50);
    const long s = std::min<long>(50, n_eff / 10);
    const long budget = std::max<long>(500, std::llround(10000.0 * scale));
    meta["n"] = n_eff;
    meta["s"] = s;
    meta["budget"] = budget;
    ExperimentConfig cfg =
        base_config(n_eff, s, 1.0, 0.1, NoiseKind::Gaussian, budget, 10);
    cfg.algorithms = {AlgorithmSpec{"smdsr", SmdSrMode::Practical, std::nullopt, false, 0.1},
                      AlgorithmSpec{"lasso", SmdSrMode::Practical, std::nullopt, false, 0.1}};
    for (const auto& set : execute(cfg)) {
      auto rows = summarize(set, "ks1_sigma0.1");
      summary.insert(summary.end(), rows.begin(), rows.end());
    }
  } else {
    throw std::invalid_argument("replicate_figure: unknown figure '" + which + "'");
  }

  out.summary_file = output_dir + "/" + which + ".csv";
  write_summary_csv(out.summary_file, summary, true);
  std::ofstream mf(output_dir + "/" + which + "_meta.json", std::ios::binary);
  mf << meta.dump(2) << "\n";
  return out;
}

}  // namespace sparsemd

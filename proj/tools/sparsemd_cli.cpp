#include <CLI11.hpp>

#include <chrono>
#include <cstdio>

#include "sparsemd/baselines.hpp"
#include "sparsemd/experiment.hpp"

using namespace sparsemd;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

int run_bench() {
  RngStream rng(7, 0);
  std::printf("%-44s %10s\n", "operation", "ms");

  for (const Eigen::Index n : {1000L, 10000L, 100000L}) {
    const ProxSetup setup = ProxSetup::l1_power(n);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.next_gaussian();
    const Point x = Point::vector(v);
    const Point u = Point::vector(v.reverse());
    const Point x0 = Point::vector(Eigen::VectorXd::Zero(n));
    const double ms = time_ms([&] {
      Point z = x;
      for (int it = 0; it < 50; ++it) z = prox_map(setup, u, z, x0, 2.0);
    });
    std::printf("l1 prox n=%-8ld x50                     %10.2f\n", static_cast<long>(n), ms);
  }

  for (const Eigen::Index q : {16L, 64L, 128L}) {
    const ProxSetup setup = ProxSetup::nuclear(q, q);
    Eigen::MatrixXd m(q, q);
    for (Eigen::Index j = 0; j < q; ++j)
      for (Eigen::Index i = 0; i < q; ++i) m(i, j) = rng.next_gaussian();
    const Point x = Point::matrix(m);
    const Point u = Point::matrix(m.transpose());
    const Point x0 = Point::matrix(Eigen::MatrixXd::Zero(q, q));
    const double ms = time_ms([&] {
      Point z = x;
      for (int it = 0; it < 20; ++it) z = prox_map(setup, u, z, x0, 2.0);
    });
    std::printf("nuclear prox q=%-6ld x20                  %10.2f\n", static_cast<long>(q), ms);
  }

  {
    RngStream inst_rng(11, 0);
    GlrModel model = make_paper_instance(2000, 20, 1.0, 1.0, 0.1, RegressorKind::Gaussian,
                                         NoiseKind::Gaussian, inst_rng);
    const ProxSetup setup = ProxSetup::l1_power(2000);
    const double ms = time_ms([&] {
      RngStream run_rng(11, 1);
      vanilla_smd(model, setup, 2000, StepsizeRule::per_sample(1.0), run_rng);
    });
    std::printf("smd n=2000 budget=2000                       %10.2f\n", ms);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multistage stochastic mirror descent for sparse recovery"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("--config", config_path, "Path to the experiment config")->required();

  std::string figure = "fig1";
  double scale = 0.02;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int replications = 20;
  auto* rep = app.add_subcommand("replicate", "Replicate a benchmark figure at reduced scale");
  rep->add_option("--figure", figure, "fig1 | fig2 | fig3")->required();
  rep->add_option("--scale", scale, "Instance scale in (0, 1]")->required();
  rep->add_option("--output", output_dir, "Output directory");
  rep->add_option("--seed", seed, "Root seed");
  rep->add_option("--replications", replications, "Simulations per combination");

  auto* bench = app.add_subcommand("bench", "Micro-benchmarks of the core operations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
      const ExperimentOutputs out = run_experiment(cfg);
      for (const auto& f : out.trace_files) std::printf("wrote %s\n", f.c_str());
      std::printf("wrote %s\n", out.summary_file.c_str());
    } else if (rep->parsed()) {
      if (const char* env_dir = std::getenv("OUTPUT_DIR")) output_dir = env_dir;
      if (const char* env_seed = std::getenv("EXPERIMENT_SEED"))
        seed = std::strtoull(env_seed, nullptr, 10);
      const ExperimentOutputs out =
          replicate_figure(figure, scale, output_dir, seed, replications);
      std::printf("wrote %s\n", out.summary_file.c_str());
    } else if (bench->parsed()) {
      return run_bench();
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

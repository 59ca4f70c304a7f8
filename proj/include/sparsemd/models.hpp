#pragma once

#include "sparsemd/constants.hpp"
#include "sparsemd/oracle.hpp"
#include "sparsemd/point.hpp"
#include "sparsemd/prox.hpp"
#include "sparsemd/rng.hpp"

namespace sparsemd {

enum class ActivationKind { Linear, RampLinear };

// Strongly monotone Lipschitz link u with u_lo*(t-t') <= u(t)-u(t') <= u_hi*(t-t').
// The ramp variant is u(t) = u_lo*t + (u_hi-u_lo)*clip(t, -1, 1), which meets
// both bounds exactly and has an elementary primitive.
struct Activation {
  ActivationKind kind = ActivationKind::Linear;
  double u_lo = 1.0, u_hi = 1.0;

  static Activation linear() { return {}; }
  static Activation ramp_linear(double lo, double hi);

  double value(double t) const;
  double primitive(double t) const;  // U with U' = u, U(0) = 0
};

enum class RegressorKind { Gaussian, StudentT, RademacherScaled, GaussianScaleMixture };
enum class MixerKind { StudentT, Exponential };

// Regressor families with target covariance diag(sigma_diag); scale mixtures
// are normalized so the covariance matches after mixing.
struct RegressorDistribution {
  RegressorKind kind = RegressorKind::Gaussian;
  Eigen::VectorXd sigma_diag;
  int dof = 5;                           // student t regressors, > 4
  MixerKind mixer = MixerKind::StudentT;  // gaussian scale mixture
  int mixer_dof = 5;
  double mixer_lambda = 1.0;

  static RegressorDistribution gaussian(Eigen::VectorXd sigma_diag);
  static RegressorDistribution student_t(int dof, Eigen::VectorXd sigma_diag);
  static RegressorDistribution rademacher_scaled(Eigen::VectorXd sigma_diag);
  static RegressorDistribution gaussian_scale_mixture(MixerKind mixer, double param,
                                                      Eigen::VectorXd sigma_diag);
};

enum class NoiseKind { Gaussian, StudentT4 };

struct Observation {
  Point regressor;
  double response = 0.0;
};

// Sparse generalized linear regression: eta = u(phi' x*) + sigma * xi.
class GlrModel : public StochasticOracle {
 public:
  GlrModel(Eigen::VectorXd x_star, double sigma, Activation activation,
           RegressorDistribution regressors, NoiseKind noise = NoiseKind::Gaussian);

  Eigen::Index dim() const { return x_star_.size(); }
  const Eigen::VectorXd& x_star() const { return x_star_; }
  const Eigen::VectorXd& sigma_diag() const { return regressors_.sigma_diag; }
  double noise_sigma() const { return sigma_; }
  const Activation& activation() const { return activation_; }
  const RegressorDistribution& regressors() const { return regressors_; }

  Observation sample_observation(RngStream& rng) const;
  Point gradient_at(const Point& x, const Observation& obs) const;

  Point zero() const override;
  GradientSample sample_gradient(const Point& x, RngStream& rng,
                                 bool want_step_scale) const override;
  GradientField sample_field(RngStream& rng) const override;
  std::optional<double> exact_gap(const Point& x) const override;
  std::optional<double> sigma_norm_of(const Point& diff) const override;
  const Point* optimum() const override { return &optimum_; }

 private:
  Eigen::VectorXd draw_regressor(RngStream& rng) const;
  double draw_noise(RngStream& rng) const;

  Eigen::VectorXd x_star_;
  Point optimum_;
  double sigma_;
  Activation activation_;
  RegressorDistribution regressors_;
  NoiseKind noise_;
};

enum class MatrixRegressorKind { GaussianIID, RademacherIID };

// Low-rank trace regression: eta = <phi, x*> + sigma * xi with iid-entry
// matrix regressors (covariance operator = identity).
class TraceModel : public StochasticOracle {
 public:
  TraceModel(Eigen::MatrixXd x_star, double sigma,
             MatrixRegressorKind regressors = MatrixRegressorKind::GaussianIID,
             NoiseKind noise = NoiseKind::Gaussian);

  const Eigen::MatrixXd& x_star() const { return x_star_; }
  double noise_sigma() const { return sigma_; }

  Observation sample_observation(RngStream& rng) const;
  Point gradient_at(const Point& x, const Observation& obs) const;

  Point zero() const override;
  GradientSample sample_gradient(const Point& x, RngStream& rng,
                                 bool want_step_scale) const override;
  GradientField sample_field(RngStream& rng) const override;
  std::optional<double> exact_gap(const Point& x) const override;
  std::optional<double> sigma_norm_of(const Point& diff) const override;
  const Point* optimum() const override { return &optimum_; }

 private:
  Eigen::MatrixXd draw_regressor(RngStream& rng) const;
  double draw_noise(RngStream& rng) const;

  Eigen::MatrixXd x_star_;
  Point optimum_;
  double sigma_;
  MatrixRegressorKind regressors_;
  NoiseKind noise_;
};

// Fills the multistage constants from the model family, with every suppressed
// absolute constant set to 1 (scaled by `multiplier`); theta comes from the
// prox setup and the initial radius from the caller.
AlgoConstants suggest_constants(const GlrModel& model, const ProxSetup& setup, double radius,
                                double multiplier = 1.0);
AlgoConstants suggest_constants(const TraceModel& model, const ProxSetup& setup, double radius,
                                double multiplier = 1.0);

// The benchmark instance: Sigma diagonal evenly spaced over [kappa_sigma, nu_top],
// support indices evenly spaced with stride floor(n/s), standard normal values.
GlrModel make_paper_instance(Eigen::Index n, long s, double kappa_sigma, double nu_top,
                             double sigma, RegressorKind regressor_kind, NoiseKind noise,
                             RngStream& rng, int regressor_dof = 5);

// A rank-s matrix with unit-scale singular directions, for trace experiments.
Eigen::MatrixXd make_low_rank_matrix(Eigen::Index p, Eigen::Index q, long rank, RngStream& rng);

}  // namespace sparsemd

#include "sparsemd/models.hpp"

#include <cmath>

namespace sparsemd {

namespace {
constexpr double kT4UnitVarianceScale = 0.7071067811865476;  // Var(t_4) = 2
}

Activation Activation::ramp_linear(double lo, double hi) {
  if (!(lo > 0.0) || hi < lo)
    throw std::invalid_argument("activation: need 0 < u_lo <= u_hi");
  return {ActivationKind::RampLinear, lo, hi};
}

double Activation::value(double t) const {
  if (kind == ActivationKind::Linear) return t;
  const double clipped = std::clamp(t, -1.0, 1.0);
  return u_lo * t + (u_hi - u_lo) * clipped;
}

double Activation::primitive(double t) const {
  if (kind == ActivationKind::Linear) return 0.5 * t * t;
  const double a = std::abs(t);
  const double ramp = a <= 1.0 ? 0.5 * t * t : a - 0.5;
  return 0.5 * u_lo * t * t + (u_hi - u_lo) * ramp;
}

RegressorDistribution RegressorDistribution::gaussian(Eigen::VectorXd sigma_diag) {
  RegressorDistribution d;
  d.kind = RegressorKind::Gaussian;
  d.sigma_diag = std::move(sigma_diag);
  return d;
}

RegressorDistribution RegressorDistribution::student_t(int dof, Eigen::VectorXd sigma_diag) {
  if (dof <= 4) throw std::invalid_argument("student t regressors need dof > 4");
  RegressorDistribution d;
  d.kind = RegressorKind::StudentT;
  d.dof = dof;
  d.sigma_diag = std::move(sigma_diag);
  return d;
}

RegressorDistribution RegressorDistribution::rademacher_scaled(Eigen::VectorXd sigma_diag) {
  RegressorDistribution d;
  d.kind = RegressorKind::RademacherScaled;
  d.sigma_diag = std::move(sigma_diag);
  return d;
}

RegressorDistribution RegressorDistribution::gaussian_scale_mixture(MixerKind mixer,
                                                                    double param,
                                                                    Eigen::VectorXd sigma_diag) {
  RegressorDistribution d;
  d.kind = RegressorKind::GaussianScaleMixture;
  d.mixer = mixer;
  d.sigma_diag = std::move(sigma_diag);
  if (mixer == MixerKind::StudentT) {
    d.mixer_dof = static_cast<int>(param);
    if (d.mixer_dof <= 4) throw std::invalid_argument("scale mixture mixer needs dof > 4");
  } else {
    d.mixer_lambda = param;
    if (param <= 0.0) throw std::invalid_argument("exponential mixer rate must be positive");
  }
  return d;
}

// ---------------------------------------------------------------------------

GlrModel::GlrModel(Eigen::VectorXd x_star, double sigma, Activation activation,
                   RegressorDistribution regressors, NoiseKind noise)
    : x_star_(std::move(x_star)),
      optimum_(Point::vector(x_star_)),
      sigma_(sigma),
      activation_(activation),
      regressors_(std::move(regressors)),
      noise_(noise) {
  if (sigma_ < 0.0) throw std::invalid_argument("model: sigma must be nonnegative");
  if (regressors_.sigma_diag.size() != x_star_.size())
    throw DimensionError("model: covariance dimension does not match x*");
  if ((regressors_.sigma_diag.array() <= 0.0).any())
    throw std::invalid_argument("model: covariance diagonal must be positive");
}

Eigen::VectorXd GlrModel::draw_regressor(RngStream& rng) const {
  const Eigen::Index n = dim();
  Eigen::VectorXd phi(n);
  switch (regressors_.kind) {
    case RegressorKind::Gaussian:
      for (Eigen::Index i = 0; i < n; ++i)
        phi(i) = std::sqrt(regressors_.sigma_diag(i)) * rng.next_gaussian();
      return phi;
    case RegressorKind::RademacherScaled:
      for (Eigen::Index i = 0; i < n; ++i)
        phi(i) = std::sqrt(regressors_.sigma_diag(i)) * rng.next_sign();
      return phi;
    case RegressorKind::StudentT: {
      // phi = sqrt(Z) * eta with Z = dof/chi2_dof; the Gaussian base is scaled
      // by (dof-2)/dof so that cov(phi) = diag(sigma_diag).
      const int dof = regressors_.dof;
      const double z = dof / rng.next_chi2(dof);
      const double base = std::sqrt(static_cast<double>(dof - 2) / dof);
      for (Eigen::Index i = 0; i < n; ++i)
        phi(i) = std::sqrt(z) * base * std::sqrt(regressors_.sigma_diag(i)) * rng.next_gaussian();
      return phi;
    }
    case RegressorKind::GaussianScaleMixture: {
      double z, mean_z;
      if (regressors_.mixer == MixerKind::StudentT) {
        const int dof = regressors_.mixer_dof;
        z = dof / rng.next_chi2(dof);
        mean_z = static_cast<double>(dof) / (dof - 2);
      } else {
        z = rng.next_exponential(regressors_.mixer_lambda);
        mean_z = 1.0 / regressors_.mixer_lambda;
      }
      const double base = std::sqrt(1.0 / mean_z);
      for (Eigen::Index i = 0; i < n; ++i)
        phi(i) = std::sqrt(z) * base * std::sqrt(regressors_.sigma_diag(i)) * rng.next_gaussian();
      return phi;
    }
  }
  throw std::invalid_argument("unknown regressor family");
}

double GlrModel::draw_noise(RngStream& rng) const {
  if (noise_ == NoiseKind::Gaussian) return rng.next_gaussian();
  return kT4UnitVarianceScale * rng.next_student_t(4);
}

Observation GlrModel::sample_observation(RngStream& rng) const {
  Eigen::VectorXd phi = draw_regressor(rng);
  const double eta = activation_.value(phi.dot(x_star_)) + sigma_ * draw_noise(rng);
  return {Point::vector(std::move(phi)), eta};
}

Point GlrModel::gradient_at(const Point& x, const Observation& obs) const {
  x.require_same_shape(obs.regressor);
  const double pred = activation_.value(obs.regressor.flat().dot(x.flat()));
  return (pred - obs.response) * obs.regressor;
}

Point GlrModel::zero() const { return Point::vector(Eigen::VectorXd::Zero(dim())); }

GradientSample GlrModel::sample_gradient(const Point& x, RngStream& rng,
                                         bool want_step_scale) const {
  Observation obs = sample_observation(rng);
  GradientSample out;
  out.gradient = gradient_at(x, obs);
  out.sample_cost = 1;
  if (want_step_scale) {
    const double m = norm_eval(obs.regressor, Norm::LInf);
    out.step_scale = m * m;
  }
  return out;
}

GradientField GlrModel::sample_field(RngStream& rng) const {
  Observation obs = sample_observation(rng);
  return [this, obs = std::move(obs)](const Point& x) { return gradient_at(x, obs); };
}

std::optional<double> GlrModel::exact_gap(const Point& x) const {
  if (activation_.kind != ActivationKind::Linear) return std::nullopt;
  const Eigen::VectorXd diff = x.flat() - x_star_;
  return 0.5 * diff.cwiseProduct(regressors_.sigma_diag.cwiseProduct(diff)).sum();
}

std::optional<double> GlrModel::sigma_norm_of(const Point& diff) const {
  return sigma_norm(diff, regressors_.sigma_diag);
}

// ---------------------------------------------------------------------------

TraceModel::TraceModel(Eigen::MatrixXd x_star, double sigma, MatrixRegressorKind regressors,
                       NoiseKind noise)
    : x_star_(std::move(x_star)),
      optimum_(Point::matrix(x_star_)),
      sigma_(sigma),
      regressors_(regressors),
      noise_(noise) {
  if (sigma_ < 0.0) throw std::invalid_argument("model: sigma must be nonnegative");
  if (x_star_.rows() < x_star_.cols())
    throw DimensionError("trace model: need p >= q");
}

Eigen::MatrixXd TraceModel::draw_regressor(RngStream& rng) const {
  Eigen::MatrixXd phi(x_star_.rows(), x_star_.cols());
  if (regressors_ == MatrixRegressorKind::GaussianIID) {
    for (Eigen::Index j = 0; j < phi.cols(); ++j)
      for (Eigen::Index i = 0; i < phi.rows(); ++i) phi(i, j) = rng.next_gaussian();
  } else {
    for (Eigen::Index j = 0; j < phi.cols(); ++j)
      for (Eigen::Index i = 0; i < phi.rows(); ++i) phi(i, j) = rng.next_sign();
  }
  return phi;
}

double TraceModel::draw_noise(RngStream& rng) const {
  if (noise_ == NoiseKind::Gaussian) return rng.next_gaussian();
  return kT4UnitVarianceScale * rng.next_student_t(4);
}

Observation TraceModel::sample_observation(RngStream& rng) const {
  Eigen::MatrixXd phi = draw_regressor(rng);
  const double eta = (phi.array() * x_star_.array()).sum() + sigma_ * draw_noise(rng);
  return {Point::matrix(std::move(phi)), eta};
}

Point TraceModel::gradient_at(const Point& x, const Observation& obs) const {
  x.require_same_shape(obs.regressor);
  const double pred = obs.regressor.flat().dot(x.flat());
  return (pred - obs.response) * obs.regressor;
}

Point TraceModel::zero() const {
  return Point::matrix(Eigen::MatrixXd::Zero(x_star_.rows(), x_star_.cols()));
}

namespace {
// Squared spectral norm via power iteration on phi' phi; the per-sample
// stepsize rule only needs a few digits.
double spectral_sq_estimate(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd w = m.transpose() * (m * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double next = nw;
    const bool settled = std::abs(next - lambda) <= 1e-6 * next;
    lambda = next;
    v = std::move(w);
    if (settled) break;
  }
  return lambda;
}
}  // namespace

GradientSample TraceModel::sample_gradient(const Point& x, RngStream& rng,
                                           bool want_step_scale) const {
  Observation obs = sample_observation(rng);
  GradientSample out;
  out.gradient = gradient_at(x, obs);
  out.sample_cost = 1;
  if (want_step_scale) out.step_scale = spectral_sq_estimate(obs.regressor.mat());
  return out;
}

GradientField TraceModel::sample_field(RngStream& rng) const {
  Observation obs = sample_observation(rng);
  return [this, obs = std::move(obs)](const Point& x) { return gradient_at(x, obs); };
}

std::optional<double> TraceModel::exact_gap(const Point& x) const {
  const Eigen::MatrixXd diff = x.mat() - x_star_;
  return 0.5 * diff.squaredNorm();
}

std::optional<double> TraceModel::sigma_norm_of(const Point& diff) const {
  return diff.l2();  // identity covariance operator
}

// ---------------------------------------------------------------------------

AlgoConstants suggest_constants(const GlrModel& model, const ProxSetup& setup, double radius,
                                double multiplier) {
  const auto& dist = model.regressors();
  const double upsilon = dist.sigma_diag.maxCoeff();
  const double kappa_sigma = dist.sigma_diag.minCoeff();
  const double u_lo = model.activation().u_lo;
  const double u_hi = model.activation().u_hi;
  const double ln_2n = std::log(2.0 * static_cast<double>(model.dim()));
  const double sigma2 = model.noise_sigma() * model.noise_sigma();

  AlgoConstants c;
  c.nu = upsilon;
  c.lowkap = u_lo * kappa_sigma;
  c.s_bar = 1;  // caller overrides with the instance sparsity bound
  c.radius = radius;
  c.theta = setup.theta;

  // second-moment ratio E{Z^2}/(E{Z})^2 of the scale mixer (1 = no mixing)
  double heavy = 1.0;
  if (dist.kind == RegressorKind::StudentT)
    heavy = 3.0 * (dist.dof - 2) / static_cast<double>(dist.dof - 4);
  else if (dist.kind == RegressorKind::GaussianScaleMixture)
    heavy = dist.mixer == MixerKind::StudentT
                ? 3.0 * (dist.mixer_dof - 2) / static_cast<double>(dist.mixer_dof - 4)
                : 2.0;

  if (dist.kind == RegressorKind::RademacherScaled) {
    // bounded regressors: ||phi||_inf <= mu = sqrt(upsilon) almost surely
    const double mu = std::sqrt(upsilon);
    const double root = mu + std::sqrt(upsilon);
    c.varkappa = multiplier * 4.0 * (u_hi * u_hi / u_lo) * root * root / upsilon;
    c.varkappa_prime = 2.0;
    c.sigma_star_sq = mu * mu * sigma2;
  } else {
    // Gaussian scale mixtures (the plain Gaussian has trivial mixer): fourth
    // moments give E||phi phi' z||_inf^2 <= 3.5 h (ln(2n)+2) upsilon ||z||_Sigma^2
    // with h the mixer ratio, so the variance transfer holds with the
    // constants below. The noise floor is sigma^2 E||phi||_inf^2.
    const double root = std::sqrt(3.5 * heavy * (ln_2n + 2.0)) + 1.0;
    c.varkappa = multiplier * 4.0 * (u_hi * u_hi / u_lo) * root * root;
    c.varkappa_prime = 2.0;
    c.sigma_star_sq = multiplier * 2.0 * upsilon * (ln_2n + 1.0) * sigma2;
  }
  c.varkappa = std::max(c.varkappa, 1.0);
  return c;
}

AlgoConstants suggest_constants(const TraceModel& model, const ProxSetup& setup, double radius,
                                double multiplier) {
  const double pq = static_cast<double>(model.x_star().rows() + model.x_star().cols());
  const double sigma2 = model.noise_sigma() * model.noise_sigma();
  AlgoConstants c;
  c.nu = multiplier * pq;  // nu = E||phi||_*^2 <= C (p+q) for iid entries
  c.varkappa = 1.0;
  c.varkappa_prime = 1.0;
  c.lowkap = 1.0;  // identity covariance operator
  c.sigma_star_sq = c.nu * sigma2;
  c.s_bar = 1;
  c.radius = radius;
  c.theta = setup.theta;
  return c;
}

GlrModel make_paper_instance(Eigen::Index n, long s, double kappa_sigma, double nu_top,
                             double sigma, RegressorKind regressor_kind, NoiseKind noise,
                             RngStream& rng, int regressor_dof) {
  if (s < 1 || s > n) throw std::invalid_argument("instance: need 1 <= s <= n");
  if (!(kappa_sigma > 0.0) || nu_top < kappa_sigma)
    throw std::invalid_argument("instance: need 0 < kappa_sigma <= nu");

  Eigen::VectorXd diag(n);
  if (n == 1) {
    diag(0) = kappa_sigma;
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      diag(i) = kappa_sigma + (nu_top - kappa_sigma) * static_cast<double>(i) / (n - 1);
  }

  Eigen::VectorXd x_star = Eigen::VectorXd::Zero(n);
  const Eigen::Index stride = n / s;
  for (long k = 0; k < s; ++k) x_star(k * stride) = rng.next_gaussian();

  RegressorDistribution dist;
  switch (regressor_kind) {
    case RegressorKind::Gaussian:
      dist = RegressorDistribution::gaussian(diag);
      break;
    case RegressorKind::StudentT:
      dist = RegressorDistribution::student_t(regressor_dof, diag);
      break;
    case RegressorKind::RademacherScaled:
      dist = RegressorDistribution::rademacher_scaled(diag);
      break;
    case RegressorKind::GaussianScaleMixture:
      dist = RegressorDistribution::gaussian_scale_mixture(MixerKind::StudentT, regressor_dof,
                                                           diag);
      break;
  }
  return GlrModel(std::move(x_star), sigma, Activation::linear(), std::move(dist), noise);
}

Eigen::MatrixXd make_low_rank_matrix(Eigen::Index p, Eigen::Index q, long rank, RngStream& rng) {
  if (rank < 1 || rank > q) throw std::invalid_argument("low rank matrix: need 1 <= rank <= q");
  Eigen::MatrixXd a(p, rank), b(q, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) a(i, j) = rng.next_gaussian();
    for (Eigen::Index i = 0; i < q; ++i) b(i, j) = rng.next_gaussian();
  }
  return a * b.transpose() / std::sqrt(static_cast<double>(p));
}

}  // namespace sparsemd

#include "sparsemd/prox.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace sparsemd {

namespace {

constexpr double kE = 2.718281828459045235;

// ||v||_p computed against the largest entry so small exponents p-1 never
// see out-of-range powers.
double lp_norm(const Eigen::VectorXd& v, double p) {
  const double m = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)) / m, p);
  return m * std::pow(s, 1.0 / p);
}

// Gradient of scale*||.||_p^2 in normalized form: y_i = 2*scale*t*(|v_i|/t)^(p-1),
// t = ||v||_p. The ratio is <= 1, so the small fractional power stays stable.
Eigen::VectorXd power_map(const Eigen::VectorXd& v, double p, double scale) {
  const double t = lp_norm(v, p);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(v.size());
  if (t == 0.0) return y;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a == 0.0) continue;
    y(i) = std::copysign(2.0 * scale * t * std::pow(a / t, p - 1.0), v(i));
  }
  return y;
}

// Inverse of power_map via the dual exponent q = p/(p-1):
// ||x||_p = ||y||_q / (2 scale) and x_i = sgn(y_i) ||x||_p (|y_i|/||y||_q)^(1/(p-1)).
Eigen::VectorXd power_map_inverse(const Eigen::VectorXd& y, double p, double scale) {
  const double q = p / (p - 1.0);
  const double ty = lp_norm(y, q);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(y.size());
  if (ty == 0.0) return x;
  const double xnorm = ty / (2.0 * scale);
  const double inv_exp = 1.0 / (p - 1.0);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i));
    if (a == 0.0) continue;
    x(i) = std::copysign(xnorm * std::pow(a / ty, inv_exp), y(i));
  }
  return x;
}

struct ThinSvd {
  Eigen::MatrixXd u, v;
  Eigen::VectorXd sv;
};

ThinSvd thin_svd(const Eigen::MatrixXd& m) {
  if (m.rows() >= 16 && m.cols() >= 16) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

bool spectral_path(const ProxSetup& setup) { return setup.kind == ProxKind::Nuclear; }

void check_point(const ProxSetup& setup, const Point& x) {
  switch (setup.kind) {
    case ProxKind::L1Power:
      if (x.is_matrix() || x.size() != setup.n)
        throw DimensionError("prox: point does not match l1 setup dimension");
      break;
    case ProxKind::Nuclear:
      if (!x.is_matrix() || x.rows() != setup.rows || x.cols() != setup.cols)
        throw DimensionError("prox: point does not match nuclear setup shape");
      break;
    case ProxKind::Euclidean:
      break;
  }
}

double soft(double a, double thr) {
  const double m = std::abs(a) - thr;
  return m > 0.0 ? std::copysign(m, a) : 0.0;
}

}  // namespace

ProxSetup ProxSetup::l1_power(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("l1 setup requires n >= 2");
  ProxSetup s;
  s.kind = ProxKind::L1Power;
  s.n = n;
  const double ln_n = std::log(static_cast<double>(n));
  s.power = 1.0 + 1.0 / ln_n;
  s.scale = 0.5 * kE * ln_n *
            std::pow(static_cast<double>(n), (s.power - 1.0) * (2.0 - s.power) / s.power);
  s.theta = 0.5 * kE * kE * ln_n;
  return s;
}

ProxSetup ProxSetup::nuclear(Eigen::Index p, Eigen::Index q) {
  if (q < 2 || p < q) throw std::invalid_argument("nuclear setup requires p >= q >= 2");
  ProxSetup s;
  s.kind = ProxKind::Nuclear;
  s.rows = p;
  s.cols = q;
  const double r = 1.0 / (2.0 * std::log(2.0 * static_cast<double>(q)));
  s.power = 1.0 + r;
  s.scale = 2.0 * kE * std::log(2.0 * static_cast<double>(q));
  s.theta = s.scale;  // scale*||sv||_{1+r}^2 <= scale*||sv||_1^2
  return s;
}

ProxSetup ProxSetup::euclidean() { return ProxSetup{}; }

double dgf_value(const ProxSetup& setup, const Point& x) {
  check_point(setup, x);
  if (spectral_path(setup)) {
    const double t = lp_norm(singular_values(x), setup.power);
    return setup.scale * t * t;
  }
  const double t = setup.kind == ProxKind::Euclidean ? x.l2() : lp_norm(x.flat(), setup.power);
  return setup.scale * t * t;
}

Point dgf_grad(const ProxSetup& setup, const Point& x) {
  check_point(setup, x);
  if (spectral_path(setup)) {
    ThinSvd svd = thin_svd(x.mat());
    const Eigen::VectorXd h = power_map(svd.sv, setup.power, setup.scale);
    return Point::matrix(svd.u * h.asDiagonal() * svd.v.transpose());
  }
  Point y = Point::zeros_like(x);
  y.flat() = power_map(x.flat(), setup.power, setup.scale);
  return y;
}

Point dgf_grad_inverse(const ProxSetup& setup, const Point& y) {
  check_point(setup, y);
  if (spectral_path(setup)) {
    ThinSvd svd = thin_svd(y.mat());
    const Eigen::VectorXd h = power_map_inverse(svd.sv, setup.power, setup.scale);
    return Point::matrix(svd.u * h.asDiagonal() * svd.v.transpose());
  }
  Point x = Point::zeros_like(y);
  x.flat() = power_map_inverse(y.flat(), setup.power, setup.scale);
  return x;
}

double bregman(const ProxSetup& setup, const Point& x0, const Point& x, const Point& z) {
  x.require_same_shape(z);
  x.require_same_shape(x0);
  const Point dz = z - x0;
  const Point dx = x - x0;
  return dgf_value(setup, dz) - dgf_value(setup, dx) - dgf_grad(setup, dx).dot(z - x);
}

double dual_norm(const ProxSetup& setup, const Point& s) {
  check_point(setup, s);
  switch (setup.kind) {
    case ProxKind::L1Power:
      return norm_eval(s, Norm::LInf);
    case ProxKind::Nuclear:
      return norm_eval(s, Norm::Spectral);
    case ProxKind::Euclidean:
      return s.l2();
  }
  throw std::invalid_argument("unknown prox kind");
}

namespace {

// --- ball-constrained prox -------------------------------------------------
//
// On a norm ball the stationarity condition adds a multiplier lambda >= 0 on
// the ball constraint. In dual coordinates a = grad(x - x0) - u/beta the
// lambda-shifted problem keeps the whole-space closed form with a replaced by
// its soft-thresholding at theta = lambda/beta, as long as the ball center
// coincides with the prox anchor. An off-center l1 ball is handled by the
// per-coordinate shift below; the bisection on theta uses that the
// multiplier-to-norm map is monotone.

struct BallSolveResult {
  Eigen::VectorXd v;  // z - x0
  double residual;    // ||z - c||_ball - radius
};

// Per-coordinate solve given kappa = 2*scale*t^(2-p): the map
// kappa*sgn(v)|v|^(p-1) + theta*sgn(v - d) is monotone in v, with a jump of
// width 2*theta at v = d.
Eigen::VectorXd shifted_coords(const Eigen::VectorXd& a, const Eigen::VectorXd& d, double theta,
                               double log_kappa, double p) {
  const double inv_exp = 1.0 / (p - 1.0);
  Eigen::VectorXd v(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    auto inv_psi = [&](double b) {
      if (b == 0.0) return 0.0;
      const double lg = (std::log(std::abs(b)) - log_kappa) * inv_exp;
      return std::copysign(std::exp(std::min(lg, 350.0)), b);
    };
    const double hi = inv_psi(a(i) - theta);
    const double lo = inv_psi(a(i) + theta);
    if (hi > d(i))
      v(i) = hi;
    else if (lo < d(i))
      v(i) = lo;
    else
      v(i) = d(i);
  }
  return v;
}

// Solve the consistency equation t = ||v(t)||_p for the off-center l1 ball.
Eigen::VectorXd l1_shifted_solution(const ProxSetup& setup, const Eigen::VectorXd& a,
                                    const Eigen::VectorXd& d, double theta) {
  const double p = setup.power;
  auto value = [&](double t) {
    const double log_kappa = std::log(2.0 * setup.scale) + (2.0 - p) * std::log(t);
    return shifted_coords(a, d, theta, log_kappa, p);
  };
  auto excess = [&](double t) { return lp_norm(value(t), p) - t; };

  double lo = 1e-30;
  if (excess(lo) <= 0.0) return value(lo);  // everything stuck at the kink
  double hi = std::max(1.0, lp_norm(a, p / (p - 1.0)) / (2.0 * setup.scale) + lp_norm(d, p));
  for (int i = 0; i < 200 && excess(hi) > 0.0; ++i) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return value(hi);
}

BallSolveResult solve_l1_ball(const ProxSetup& setup, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& d, double radius, double theta) {
  Eigen::VectorXd v;
  if (d.isZero(0.0)) {
    Eigen::VectorXd thr(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) thr(i) = soft(a(i), theta);
    v = power_map_inverse(thr, setup.power, setup.scale);
  } else {
    v = l1_shifted_solution(setup, a, d, theta);
  }
  return {v, (v - d).lpNorm<1>() - radius};
}

Point prox_ball(const ProxSetup& setup, const Point& a_pt, const Point& x0,
                const NormBall& ball, Point unconstrained) {
  const double radius = ball.radius;
  if (radius <= 0.0) throw std::invalid_argument("prox: ball radius must be positive");

  const double slack = norm_eval(unconstrained - ball.center, ball.norm) - radius;
  if (slack <= 1e-12 * radius) return unconstrained;

  if (ball.norm == Norm::L1) {
    const Eigen::VectorXd a = a_pt.flat();
    const Eigen::VectorXd d = (ball.center - x0).flat();
    auto solve = [&](double theta) { return solve_l1_ball(setup, a, d, radius, theta); };

    double t_lo = 0.0, t_hi = norm_eval(a_pt, Norm::LInf) + 1.0;
    for (int i = 0; i < 200 && solve(t_hi).residual > 0.0; ++i) t_hi *= 2.0;
    BallSolveResult best = solve(t_hi);
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (t_lo + t_hi);
      BallSolveResult r = solve(mid);
      if (std::abs(r.residual) <= 1e-10 * radius) {
        best = r;
        break;
      }
      (r.residual > 0.0 ? t_lo : t_hi) = mid;
      best = r.residual <= 0.0 ? r : best;
      if (i == 199 && std::abs(best.residual) > 1e-8 * radius)
        throw NumericError("prox: ball multiplier bisection did not converge", best.residual,
                           200);
    }
    Point z = x0;
    z.flat() += best.v;
    return z;
  }

  // Nuclear ball: the singular-value soft-thresholding form needs the ball
  // center and the prox anchor to share an SVD basis, which we only guarantee
  // when they coincide.
  const double center_gap = (ball.center - x0).l2();
  if (center_gap > 1e-12 * (1.0 + x0.l2()))
    throw std::invalid_argument(
        "prox: nuclear ball domain requires the ball center to equal the prox center");
  ThinSvd svd = thin_svd(a_pt.mat());
  auto solve = [&](double theta) {
    Eigen::VectorXd thr(svd.sv.size());
    for (Eigen::Index i = 0; i < svd.sv.size(); ++i) thr(i) = soft(svd.sv(i), theta);
    return power_map_inverse(thr, setup.power, setup.scale);
  };
  double t_lo = 0.0, t_hi = svd.sv.size() ? svd.sv(0) : 1.0;
  Eigen::VectorXd h = solve(t_hi);
  for (int i = 0; i < 200 && h.sum() > radius; ++i) {
    t_hi *= 2.0;
    h = solve(t_hi);
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (t_lo + t_hi);
    Eigen::VectorXd hm = solve(mid);
    const double res = hm.sum() - radius;
    if (std::abs(res) <= 1e-10 * radius) {
      h = hm;
      break;
    }
    (res > 0.0 ? t_lo : t_hi) = mid;
    if (res <= 0.0) h = hm;
  }
  Point z = x0;
  z.mat() += svd.u * h.asDiagonal() * svd.v.transpose();
  return z;
}

}  // namespace

Point prox_map(const ProxSetup& setup, const Point& u, const Point& x, const Point& x0,
               double beta) {
  if (beta <= 0.0) throw std::invalid_argument("prox: beta must be positive");
  check_point(setup, x);
  x.require_same_shape(u);
  x.require_same_shape(x0);

  const Point a = dgf_grad(setup, x - x0) - (1.0 / beta) * u;
  Point z = x0 + dgf_grad_inverse(setup, a);
  if (!setup.domain) return z;
  return prox_ball(setup, a, x0, *setup.domain, std::move(z));
}

}  // namespace sparsemd

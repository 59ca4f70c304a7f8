#pragma once

#include <optional>

#include "sparsemd/norms.hpp"
#include "sparsemd/point.hpp"

namespace sparsemd {

enum class ProxKind { L1Power, Nuclear, Euclidean };

struct NormBall {
  Point center;
  double radius = 1.0;
  Norm norm = Norm::L1;  // L1 or Nuclear
};

// Proximal setup: a distance-generating function theta(x) = scale * ||x||_p^2
// (on coordinates for the l1 setup, on singular values for the nuclear one,
// plain squared Euclidean norm otherwise), its quadratic-growth constant, and
// the optimization domain. Default domain is the whole space.
struct ProxSetup {
  ProxKind kind = ProxKind::Euclidean;
  Eigen::Index n = 0;               // l1 setup ambient dimension
  Eigen::Index rows = 0, cols = 0;  // nuclear setup shape, rows >= cols
  double power = 2.0;               // p = 1 + 1/ln n, resp. 1 + 1/(2 ln 2q)
  double scale = 0.5;               // c_n, resp. 2e ln(2q); 1/2 for Euclidean
  double theta = 0.5;               // quadratic growth constant
  std::optional<NormBall> domain;

  static ProxSetup l1_power(Eigen::Index n);
  static ProxSetup nuclear(Eigen::Index p, Eigen::Index q);
  static ProxSetup euclidean();

  ProxSetup with_ball(NormBall ball) const {
    ProxSetup s = *this;
    s.domain = std::move(ball);
    return s;
  }
};

double dgf_value(const ProxSetup& setup, const Point& x);
Point dgf_grad(const ProxSetup& setup, const Point& x);
// Inverse of the gradient map: dgf_grad(setup, dgf_grad_inverse(setup, y)) == y.
Point dgf_grad_inverse(const ProxSetup& setup, const Point& y);

// Bregman divergence V_{x0}(x, z) anchored at x0.
double bregman(const ProxSetup& setup, const Point& x0, const Point& x, const Point& z);

// argmin over the domain of <u, z> + beta * V_{x0}(x, z). On the whole space
// this is x0 + grad^{-1}(grad(x - x0) - u/beta); on a norm ball the
// constraint multiplier is found by bisection.
Point prox_map(const ProxSetup& setup, const Point& u, const Point& x, const Point& x0,
               double beta);

// Norm conjugate to the setup's primal norm.
double dual_norm(const ProxSetup& setup, const Point& s);

}  // namespace sparsemd

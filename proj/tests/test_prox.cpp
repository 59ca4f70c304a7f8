#include <doctest.h>

#include <cmath>

#include "sparsemd/prox.hpp"
#include "sparsemd/rng.hpp"

using namespace sparsemd;

namespace {

Point random_vec(Eigen::Index n, RngStream& rng, double scale = 1.0) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = scale * rng.next_gaussian();
  return Point::vector(x);
}

Point random_mat(Eigen::Index p, Eigen::Index q, RngStream& rng) {
  Eigen::MatrixXd m(p, q);
  for (Eigen::Index j = 0; j < q; ++j)
    for (Eigen::Index i = 0; i < p; ++i) m(i, j) = rng.next_gaussian();
  return Point::matrix(m);
}

Point unit_vec(Eigen::Index n, Eigen::Index i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(i) = 1.0;
  return Point::vector(e);
}

double prox_objective(const ProxSetup& setup, const Point& u, const Point& x, const Point& x0,
                      double beta, const Point& z) {
  return u.dot(z) + beta * bregman(setup, x0, x, z);
}

// Independent minimizer for the prox objective: cyclic coordinate-wise golden
// section search over a box, iterated until the sweep no longer moves.
Point brute_force_prox(const ProxSetup& setup, const Point& u, const Point& x, const Point& x0,
                       double beta) {
  const Eigen::Index n = x.size();
  auto f = [&](const Point& z) { return prox_objective(setup, u, x, x0, beta, z); };

  const double span =
      4.0 * (norm_eval(u, Norm::L2) / beta + (x - x0).l2() + x.l2() + x0.l2() + 1.0);
  Point z = x;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < 400; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double lo = z.flat()(i) - span, hi = z.flat()(i) + span;
      auto eval = [&](double v) {
        Point w = z;
        w.flat()(i) = v;
        return f(w);
      };
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      double fc = eval(c), fd = eval(d);
      while (hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi))) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          fc = eval(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + gr * (hi - lo);
          fd = eval(d);
        }
      }
      const double best = 0.5 * (lo + hi);
      moved = std::max(moved, std::abs(best - z.flat()(i)));
      z.flat()(i) = best;
    }
    if (moved < 1e-13) break;
  }
  return z;
}

}  // namespace

TEST_CASE("dgf values on fixed points") {
  const ProxSetup l1 = ProxSetup::l1_power(3);
  CHECK(dgf_value(l1, Point::vector(Eigen::VectorXd::Zero(3))) == 0.0);

  // single-coordinate point: value is exactly the scale constant
  const double p = 1.0 + 1.0 / std::log(3.0);
  const double cn = 0.5 * std::exp(1.0) * std::log(3.0) *
                    std::pow(3.0, (p - 1.0) * (2.0 - p) / p);
  CHECK(dgf_value(l1, unit_vec(3, 0)) == doctest::Approx(cn).epsilon(1e-12));
  CHECK(l1.power == doctest::Approx(p));

  const ProxSetup nuc = ProxSetup::nuclear(2, 2);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  CHECK(dgf_value(nuc, Point::matrix(m)) ==
        doctest::Approx(2.0 * std::exp(1.0) * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("dgf gradient basics") {
  const ProxSetup l1 = ProxSetup::l1_power(5);
  CHECK(dgf_grad(l1, Point::vector(Eigen::VectorXd::Zero(5))).l2() == 0.0);

  // a single active coordinate collapses the gradient to 2*cn*t
  const double t = 1.7;
  const Point g = dgf_grad(l1, t * unit_vec(5, 2));
  CHECK(g.flat()(2) == doctest::Approx(2.0 * l1.scale * t).epsilon(1e-12));
  CHECK(g.flat()(0) == 0.0);
}

TEST_CASE("dgf gradient matches central differences") {
  RngStream rng(4, 0);
  const ProxSetup setup = ProxSetup::l1_power(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = random_vec(5, rng);
    const Point g = dgf_grad(setup, x);
    for (Eigen::Index i = 0; i < 5; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x.flat()(i)));
      Point xp = x, xm = x;
      xp.flat()(i) += h;
      xm.flat()(i) -= h;
      const double fd = (dgf_value(setup, xp) - dgf_value(setup, xm)) / (2.0 * h);
      CHECK(g.flat()(i) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("gradient inverse round-trips") {
  RngStream rng(5, 0);
  for (const Eigen::Index n : {3L, 10L, 100L}) {
    const ProxSetup setup = ProxSetup::l1_power(n);
    CHECK(dgf_grad_inverse(setup, Point::vector(Eigen::VectorXd::Zero(n))).l2() == 0.0);
    for (int trial = 0; trial < 34; ++trial) {
      const Point x = random_vec(n, rng);
      const Point back = dgf_grad_inverse(setup, dgf_grad(setup, x));
      CHECK((back - x).l2() <= 1e-10 * (1.0 + x.l2()));
    }
  }
  // inverts the single-coordinate gradient example
  const ProxSetup setup = ProxSetup::l1_power(3);
  const Point y = 2.0 * setup.scale * unit_vec(3, 0);
  CHECK((dgf_grad_inverse(setup, y) - unit_vec(3, 0)).l2() < 1e-12);

  const ProxSetup nuc = ProxSetup::nuclear(4, 3);
  for (int trial = 0; trial < 25; ++trial) {
    const Point x = random_mat(4, 3, rng);
    const Point back = dgf_grad_inverse(nuc, dgf_grad(nuc, x));
    CHECK((back - x).l2() <= 1e-9 * (1.0 + x.l2()));
  }
}

TEST_CASE("bregman divergence properties") {
  RngStream rng(6, 0);
  const ProxSetup l1 = ProxSetup::l1_power(6);
  const ProxSetup euc = ProxSetup::euclidean();

  SUBCASE("vanishes on the diagonal") {
    const Point x = random_vec(6, rng);
    const Point x0 = random_vec(6, rng);
    CHECK(bregman(l1, x0, x, x) == doctest::Approx(0.0));
  }

  SUBCASE("euclidean case is translation-free") {
    for (int t = 0; t < 20; ++t) {
      const Point x = random_vec(6, rng), z = random_vec(6, rng), x0 = random_vec(6, rng);
      CHECK(bregman(euc, x0, x, z) == doctest::Approx(0.5 * (z - x).l2() * (z - x).l2()));
    }
  }

  SUBCASE("dominates half the squared l1 distance") {
    for (int t = 0; t < 1000; ++t) {
      const Point x = random_vec(6, rng), z = random_vec(6, rng), x0 = random_vec(6, rng);
      const double v = bregman(l1, x0, x, z);
      const double l1d = norm_eval(x - z, Norm::L1);
      CHECK(v >= 0.5 * l1d * l1d - 1e-9 * (1.0 + v));
    }
  }
}

TEST_CASE("strong convexity and quadratic growth of the dgf") {
  RngStream rng(7, 0);
  for (const Eigen::Index n : {10L, 100L}) {
    const ProxSetup setup = ProxSetup::l1_power(n);
    for (int t = 0; t < 300; ++t) {
      const Point x = random_vec(n, rng), y = random_vec(n, rng);
      const double mid = dgf_value(setup, 0.5 * (x + y));
      const double l1d = norm_eval(x - y, Norm::L1);
      CHECK(mid <= 0.5 * dgf_value(setup, x) + 0.5 * dgf_value(setup, y) -
                       0.125 * l1d * l1d + 1e-10);
      CHECK(dgf_value(setup, x) <=
            setup.theta * norm_eval(x, Norm::L1) * norm_eval(x, Norm::L1) * (1 + 1e-12));
    }
  }
  const ProxSetup nuc = ProxSetup::nuclear(6, 4);
  for (int t = 0; t < 300; ++t) {
    const Point x = random_mat(6, 4, rng), y = random_mat(6, 4, rng);
    const double mid = dgf_value(nuc, 0.5 * (x + y));
    const double nd = norm_eval(x - y, Norm::Nuclear);
    CHECK(mid <=
          0.5 * dgf_value(nuc, x) + 0.5 * dgf_value(nuc, y) - 0.125 * nd * nd + 1e-9);
    CHECK(dgf_value(nuc, x) <=
          nuc.theta * norm_eval(x, Norm::Nuclear) * norm_eval(x, Norm::Nuclear) * (1 + 1e-12));
  }
}

TEST_CASE("nuclear dgf is unitarily invariant") {
  RngStream rng(8, 0);
  const ProxSetup nuc = ProxSetup::nuclear(5, 5);
  for (int t = 0; t < 25; ++t) {
    const Point x = random_mat(5, 5, rng);
    const Eigen::MatrixXd qu =
        Eigen::HouseholderQR<Eigen::MatrixXd>(random_mat(5, 5, rng).mat())
            .householderQ();
    const Eigen::MatrixXd qv =
        Eigen::HouseholderQR<Eigen::MatrixXd>(random_mat(5, 5, rng).mat())
            .householderQ();
    const Point rotated = Point::matrix(qu * x.mat() * qv.transpose());
    CHECK(dgf_value(nuc, rotated) == doctest::Approx(dgf_value(nuc, x)).epsilon(1e-10));
  }
}

TEST_CASE("prox map identities") {
  RngStream rng(9, 0);
  const ProxSetup l1 = ProxSetup::l1_power(4);
  const ProxSetup euc = ProxSetup::euclidean();

  SUBCASE("zero step returns the current point") {
    const Point x = random_vec(4, rng), x0 = random_vec(4, rng);
    const Point z = prox_map(l1, Point::zeros_like(x), x, x0, 3.0);
    CHECK((z - x).l2() < 1e-10);
  }

  SUBCASE("euclidean whole space is a gradient step") {
    const Point x = random_vec(4, rng), x0 = random_vec(4, rng), u = random_vec(4, rng);
    const double beta = 2.5;
    const Point z = prox_map(euc, u, x, x0, beta);
    CHECK((z - (x - (1.0 / beta) * u)).l2() < 1e-12);
  }

  SUBCASE("beta must be positive") {
    const Point x = random_vec(4, rng);
    CHECK_THROWS_AS(prox_map(l1, x, x, x, 0.0), std::invalid_argument);
  }
}

TEST_CASE("prox map agrees with a brute-force minimizer") {
  RngStream rng(10, 0);
  for (const Eigen::Index n : {2L, 3L, 5L}) {
    const ProxSetup setup = ProxSetup::l1_power(n);
    for (int trial = 0; trial < 12; ++trial) {
      const Point u = random_vec(n, rng), x = random_vec(n, rng), x0 = random_vec(n, rng);
      const double beta = 0.5 + 3.0 * rng.next_uniform();
      const Point z = prox_map(setup, u, x, x0, beta);
      const Point zb = brute_force_prox(setup, u, x, x0, beta);
      const double fz = prox_objective(setup, u, x, x0, beta, z);
      const double fb = prox_objective(setup, u, x, x0, beta, zb);
      CHECK(fz <= fb + 1e-8 * (1.0 + std::abs(fb)));
    }
  }
}

TEST_CASE("whole-space prox beats random perturbations") {
  RngStream rng(11, 0);
  const ProxSetup setup = ProxSetup::l1_power(6);
  const Point u = random_vec(6, rng), x = random_vec(6, rng), x0 = random_vec(6, rng);
  const double beta = 2.0;
  const Point z = prox_map(setup, u, x, x0, beta);
  const double fz = prox_objective(setup, u, x, x0, beta, z);
  for (int t = 0; t < 100; ++t) {
    Point delta = random_vec(6, rng);
    delta *= 1e-3 / delta.l2();
    CHECK(fz <= prox_objective(setup, u, x, x0, beta, z + delta) + 1e-12);
  }
}

TEST_CASE("dual norms") {
  CHECK(dual_norm(ProxSetup::l1_power(3), Point::vector(Eigen::Vector3d(1, -5, 2))) ==
        doctest::Approx(5.0));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  CHECK(dual_norm(ProxSetup::nuclear(2, 2), Point::matrix(d)) == doctest::Approx(3.0));

  RngStream rng(12, 0);
  const ProxSetup setup = ProxSetup::l1_power(7);
  const Point s = random_vec(7, rng);
  const double sd = dual_norm(setup, s);
  for (int t = 0; t < 1000; ++t) {
    const Point x = random_vec(7, rng);
    CHECK(s.dot(x) <= sd * norm_eval(x, Norm::L1) + 1e-10);
  }
}

TEST_CASE("ball-constrained prox satisfies first-order optimality") {
  RngStream rng(13, 0);
  const Eigen::Index n = 5;

  auto check_setup = [&](const ProxSetup& ball_setup, const NormBall& ball) {
    for (int trial = 0; trial < 20; ++trial) {
      const Point u = 3.0 * random_vec(n, rng);
      Point x = random_vec(n, rng);
      // pull x inside the ball
      const double xn = norm_eval(x - ball.center, ball.norm);
      if (xn > ball.radius) x = ball.center + (0.9 * ball.radius / xn) * (x - ball.center);
      const Point x0 = x;  // anchor at a feasible point
      const double beta = 1.0 + rng.next_uniform();
      const Point z = prox_map(ball_setup, u, x, x0, beta);

      CHECK(norm_eval(z - ball.center, ball.norm) <= ball.radius * (1.0 + 1e-8));

      const Point grad = u + beta * (dgf_grad(ball_setup, z - x0) - dgf_grad(ball_setup, x - x0));
      for (int w = 0; w < 50; ++w) {
        Point cand = random_vec(n, rng);
        const double cn = norm_eval(cand - ball.center, ball.norm);
        if (cn > ball.radius) cand = ball.center + (ball.radius / cn) * (cand - ball.center);
        const double directional = grad.dot(cand - z);
        CHECK(directional >= -1e-6 * (1.0 + (cand - z).l2()));
      }
    }
  };

  SUBCASE("l1 ball centered at the origin") {
    NormBall ball{Point::vector(Eigen::VectorXd::Zero(n)), 1.5, Norm::L1};
    check_setup(ProxSetup::l1_power(n).with_ball(ball), ball);
  }

  SUBCASE("l1 ball off center") {
    Eigen::VectorXd c(n);
    c << 0.3, -0.2, 0.1, 0.0, 0.5;
    NormBall ball{Point::vector(c), 1.0, Norm::L1};
    check_setup(ProxSetup::l1_power(n).with_ball(ball), ball);
  }

  SUBCASE("euclidean setup with an l1 ball") {
    NormBall ball{Point::vector(Eigen::VectorXd::Zero(n)), 1.0, Norm::L1};
    check_setup(ProxSetup::euclidean().with_ball(ball), ball);
  }
}

TEST_CASE("nuclear ball prox thresholds the spectrum") {
  RngStream rng(14, 0);
  const Eigen::Index q = 4;
  const Point center = Point::matrix(Eigen::MatrixXd::Zero(q, q));
  NormBall ball{center, 1.0, Norm::Nuclear};
  const ProxSetup setup = ProxSetup::nuclear(q, q).with_ball(ball);

  const Point u = 3.0 * random_mat(q, q, rng);
  const Point x = center;
  const Point z = prox_map(setup, u, x, center, 1.5);
  CHECK(norm_eval(z - center, Norm::Nuclear) <= ball.radius * (1.0 + 1e-8));

  // off-center nuclear balls are rejected
  Eigen::MatrixXd off = Eigen::MatrixXd::Zero(q, q);
  off(0, 0) = 1.0;
  NormBall bad{Point::matrix(off), 1.0, Norm::Nuclear};
  const ProxSetup bad_setup = ProxSetup::nuclear(q, q).with_ball(bad);
  CHECK_THROWS_AS(prox_map(bad_setup, u, x, center, 1.5), std::invalid_argument);
}

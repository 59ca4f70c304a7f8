#include <doctest.h>

#include <cmath>

#include "sparsemd/rng.hpp"
#include "sparsemd/sparsify.hpp"

using namespace sparsemd;

namespace {
Point vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x(i++) = c;
  return Point::vector(x);
}

Point random_vec(Eigen::Index n, RngStream& rng) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.next_gaussian();
  return Point::vector(x);
}

Point random_sparse(const SparsityStructure& st, RngStream& rng) {
  if (st.kind == SparsityKind::LowRank) {
    Eigen::MatrixXd a(st.mat_rows, st.s), b(st.mat_cols, st.s);
    for (Eigen::Index j = 0; j < st.s; ++j) {
      for (Eigen::Index i = 0; i < st.mat_rows; ++i) a(i, j) = rng.next_gaussian();
      for (Eigen::Index i = 0; i < st.mat_cols; ++i) b(i, j) = rng.next_gaussian();
    }
    return Point::matrix(a * b.transpose());
  }
  Point z = st.kind == SparsityKind::Vanilla
                ? Point::vector(Eigen::VectorXd::Zero(st.dim))
                : Point::vector(Eigen::VectorXd::Zero(st.dim));
  if (st.kind == SparsityKind::Vanilla) {
    for (long k = 0; k < st.s; ++k)
      z.flat()(static_cast<Eigen::Index>(rng.next_u64() % st.dim)) = rng.next_gaussian();
  } else {
    for (long k = 0; k < st.s; ++k) {
      const auto& block = st.partition[rng.next_u64() % st.partition.size()];
      for (Eigen::Index i : block) z.flat()(i) = rng.next_gaussian();
    }
  }
  return z;
}
}  // namespace

TEST_CASE("vanilla truncation keeps the largest magnitudes") {
  const auto st = SparsityStructure::vanilla(3, 1);
  CHECK((sparsify_point(st, vec({3, -1, 2})) - vec({3, 0, 0})).l2() == 0.0);

  const auto full = SparsityStructure::vanilla(3, 3);
  const Point x = vec({3, -1, 2});
  CHECK((sparsify_point(full, x) - x).l2() == 0.0);
}

TEST_CASE("group truncation keeps the heaviest blocks") {
  const auto st = SparsityStructure::group({{0, 1}, {2, 3}}, 1);
  // block norms sqrt(2) vs 1.5
  CHECK((sparsify_point(st, vec({1, 1, 1.5, 0})) - vec({0, 0, 1.5, 0})).l2() == 0.0);
}

TEST_CASE("rank truncation is the diagonal cut for diagonal input") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 5.0;
  d(1, 1) = 2.0;
  const auto st = SparsityStructure::low_rank(2, 2, 1);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(2, 2);
  expect(0, 0) = 5.0;
  CHECK((sparsify_point(st, Point::matrix(d)) - Point::matrix(expect)).l2() < 1e-12);
}

TEST_CASE("truncation is idempotent and l2-optimal") {
  RngStream rng(21, 0);
  const auto st = SparsityStructure::vanilla(12, 3);
  for (int t = 0; t < 100; ++t) {
    const Point x = random_vec(12, rng);
    const Point xs = sparsify_point(st, x);
    CHECK((sparsify_point(st, xs) - xs).l2() == 0.0);
    const Point z = random_sparse(st, rng);
    CHECK((xs - x).l2() <= (z - x).l2() + 1e-12);
  }
}

TEST_CASE("sparsification error chain") {
  const auto st = SparsityStructure::vanilla(3, 1);

  SUBCASE("exact reference") {
    const Point x = vec({0.4, 0, 0});
    auto [l2, l1] = sparsify_error(st, x, x);
    CHECK(l2 == 0.0);
    CHECK(l1 == 0.0);
  }

  SUBCASE("fixed example") {
    const Point x_star = vec({1, 0, 0});
    const Point x = vec({0.9, 0.5, 0});
    auto [l2, l1] = sparsify_error(st, x, x_star);
    CHECK(l2 == doctest::Approx(0.1));
    CHECK(l2 <= 2.0 * (x - x_star).l2());
  }

  SUBCASE("non-sparse reference is rejected") {
    CHECK_THROWS_AS(sparsify_error(st, vec({1, 0, 0}), vec({1, 2, 0})),
                    std::invalid_argument);
  }
}

TEST_CASE("error amplification bound on random sweeps") {
  RngStream rng(22, 0);
  const double root2 = std::sqrt(2.0);

  SUBCASE("vanilla") {
    const auto st = SparsityStructure::vanilla(20, 4);
    for (int t = 0; t < 1000; ++t) {
      const Point x_star = random_sparse(st, rng);
      const Point x = x_star + 0.5 * random_vec(20, rng);
      auto [l2, l1] = sparsify_error(st, x, x_star);
      const double rs = root2 * std::sqrt(static_cast<double>(st.s));
      CHECK(l1 <= rs * l2 + 1e-10);
      CHECK(l2 <= 2.0 * (x - x_star).l2() + 1e-10);
    }
  }

  SUBCASE("group") {
    const auto st = SparsityStructure::group({{0, 1, 2}, {3, 4}, {5}, {6, 7}}, 2);
    for (int t = 0; t < 1000; ++t) {
      const Point x_star = random_sparse(st, rng);
      const Point x = x_star + 0.5 * random_vec(8, rng);
      auto [l2, bn] = sparsify_error(st, x, x_star);
      const double rs = root2 * std::sqrt(static_cast<double>(st.s));
      CHECK(bn <= rs * l2 + 1e-10);
      CHECK(l2 <= 2.0 * (x - x_star).l2() + 1e-10);
    }
  }

  SUBCASE("low rank") {
    const auto st = SparsityStructure::low_rank(6, 5, 2);
    for (int t = 0; t < 300; ++t) {
      const Point x_star = random_sparse(st, rng);
      Eigen::MatrixXd noise(6, 5);
      for (Eigen::Index j = 0; j < 5; ++j)
        for (Eigen::Index i = 0; i < 6; ++i) noise(i, j) = 0.3 * rng.next_gaussian();
      const Point x = x_star + Point::matrix(noise);
      auto [l2, nn] = sparsify_error(st, x, x_star);
      const double rs = root2 * std::sqrt(static_cast<double>(st.s));
      CHECK(nn <= rs * l2 + 1e-9);
      CHECK(l2 <= 2.0 * (x - x_star).l2() + 1e-9);
    }
  }
}

TEST_CASE("rank truncation matches the best approximation over random rank-s points") {
  RngStream rng(23, 0);
  const auto st = SparsityStructure::low_rank(5, 4, 2);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd m(5, 4);
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index i = 0; i < 5; ++i) m(i, j) = rng.next_gaussian();
    const Point x = Point::matrix(m);
    const Point xs = sparsify_point(st, x);
    for (int w = 0; w < 20; ++w) {
      const Point z = random_sparse(st, rng);
      CHECK((xs - x).l2() <= (z - x).l2() + 1e-10);
    }
  }
}

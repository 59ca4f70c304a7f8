#pragma once

#include <utility>
#include <vector>

#include "sparsemd/norms.hpp"
#include "sparsemd/point.hpp"

namespace sparsemd {

enum class SparsityKind { Vanilla, Group, LowRank };

// One of the three standard sparsity structures: coordinate sparsity on R^n,
// group sparsity over a fixed partition, or low rank for p-by-q matrices.
// The associated structural norm is l1 / block l1-l2 / nuclear.
struct SparsityStructure {
  SparsityKind kind = SparsityKind::Vanilla;
  long s = 1;  // sparsity level
  Eigen::Index dim = 0;
  Eigen::Index mat_rows = 0, mat_cols = 0;
  std::vector<std::vector<Eigen::Index>> partition;  // group kind only

  static SparsityStructure vanilla(Eigen::Index n, long s);
  static SparsityStructure group(std::vector<std::vector<Eigen::Index>> partition, long s);
  static SparsityStructure low_rank(Eigen::Index p, Eigen::Index q, long s);

  double structural_norm(const Point& x) const;
  bool is_sparse(const Point& x, long level, double tol = 0.0) const;
};

// Best s-sparse l2 approximation: keep the s largest-magnitude entries /
// the s blocks of largest l2 norm / the rank-s SVD truncation. Ties break
// toward the lowest index so traces stay reproducible.
Point sparsify_point(const SparsityStructure& structure, const Point& x);

// (l2 error, structural-norm error) of sparsify_point(x) against an s-sparse
// reference point.
std::pair<double, double> sparsify_error(const SparsityStructure& structure, const Point& x,
                                         const Point& x_star);

}  // namespace sparsemd

#include "sparsemd/sparsify.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

namespace sparsemd {

SparsityStructure SparsityStructure::vanilla(Eigen::Index n, long s) {
  if (s < 1 || s > n) throw std::invalid_argument("vanilla sparsity: need 1 <= s <= n");
  SparsityStructure st;
  st.kind = SparsityKind::Vanilla;
  st.s = s;
  st.dim = n;
  return st;
}

SparsityStructure SparsityStructure::group(std::vector<std::vector<Eigen::Index>> partition,
                                           long s) {
  if (partition.empty()) throw std::invalid_argument("group sparsity: empty partition");
  if (s < 1 || s > static_cast<long>(partition.size()))
    throw std::invalid_argument("group sparsity: need 1 <= s <= number of blocks");
  Eigen::Index n = 0;
  std::vector<char> seen;
  for (const auto& block : partition)
    for (Eigen::Index i : block) {
      if (i < 0) throw std::invalid_argument("group sparsity: negative index");
      if (i >= static_cast<Eigen::Index>(seen.size())) seen.resize(i + 1, 0);
      if (seen[i]++) throw std::invalid_argument("group sparsity: blocks overlap");
      n = std::max(n, i + 1);
    }
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(seen.size()); ++i)
    if (!seen[i]) throw std::invalid_argument("group sparsity: partition does not cover 0..n-1");
  SparsityStructure st;
  st.kind = SparsityKind::Group;
  st.s = s;
  st.dim = n;
  st.partition = std::move(partition);
  return st;
}

SparsityStructure SparsityStructure::low_rank(Eigen::Index p, Eigen::Index q, long s) {
  if (p < q) throw std::invalid_argument("low rank sparsity: need p >= q");
  if (s < 1 || s > q) throw std::invalid_argument("low rank sparsity: need 1 <= s <= q");
  SparsityStructure st;
  st.kind = SparsityKind::LowRank;
  st.s = s;
  st.mat_rows = p;
  st.mat_cols = q;
  return st;
}

double SparsityStructure::structural_norm(const Point& x) const {
  switch (kind) {
    case SparsityKind::Vanilla:
      return norm_eval(x, Norm::L1);
    case SparsityKind::Group:
      return block_norm(x, partition);
    case SparsityKind::LowRank:
      return norm_eval(x, Norm::Nuclear);
  }
  throw std::invalid_argument("unknown sparsity kind");
}

bool SparsityStructure::is_sparse(const Point& x, long level, double tol) const {
  switch (kind) {
    case SparsityKind::Vanilla: {
      long nnz = 0;
      const auto f = x.flat();
      for (Eigen::Index i = 0; i < f.size(); ++i)
        if (std::abs(f(i)) > tol) ++nnz;
      return nnz <= level;
    }
    case SparsityKind::Group: {
      long active = 0;
      const auto f = x.flat();
      for (const auto& block : partition) {
        double sq = 0.0;
        for (Eigen::Index i : block) sq += f(i) * f(i);
        if (std::sqrt(sq) > tol) ++active;
      }
      return active <= level;
    }
    case SparsityKind::LowRank: {
      const Eigen::VectorXd sv = singular_values(x);
      const double cutoff = std::max(tol, 1e-12 * (sv.size() ? sv(0) : 0.0));
      long rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
      return rank <= level;
    }
  }
  throw std::invalid_argument("unknown sparsity kind");
}

namespace {

Point truncate_vanilla(const SparsityStructure& st, const Point& x) {
  const auto f = x.flat();
  std::vector<Eigen::Index> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  const auto keep = std::min<Eigen::Index>(st.s, f.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      const double fa = std::abs(f(a)), fb = std::abs(f(b));
                      return fa != fb ? fa > fb : a < b;
                    });
  Point out = Point::zeros_like(x);
  auto of = out.flat();
  for (Eigen::Index k = 0; k < keep; ++k) of(order[k]) = f(order[k]);
  return out;
}

Point truncate_group(const SparsityStructure& st, const Point& x) {
  const auto f = x.flat();
  const auto blocks = static_cast<Eigen::Index>(st.partition.size());
  Eigen::VectorXd norms(blocks);
  for (Eigen::Index b = 0; b < blocks; ++b) {
    double sq = 0.0;
    for (Eigen::Index i : st.partition[b]) sq += f(i) * f(i);
    norms(b) = std::sqrt(sq);
  }
  std::vector<Eigen::Index> order(blocks);
  std::iota(order.begin(), order.end(), 0);
  const auto keep = std::min<Eigen::Index>(st.s, blocks);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      return norms(a) != norms(b) ? norms(a) > norms(b) : a < b;
                    });
  Point out = Point::zeros_like(x);
  auto of = out.flat();
  for (Eigen::Index k = 0; k < keep; ++k)
    for (Eigen::Index i : st.partition[order[k]]) of(i) = f(i);
  return out;
}

Point truncate_rank(const SparsityStructure& st, const Point& x) {
  // Eckart-Young: the rank-s SVD truncation is the best rank-s approximation.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x.mat(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto keep = std::min<Eigen::Index>(st.s, sv.size());
  Eigen::MatrixXd out = svd.matrixU().leftCols(keep) * sv.head(keep).asDiagonal() *
                        svd.matrixV().leftCols(keep).transpose();
  return Point::matrix(std::move(out));
}

void check_shape(const SparsityStructure& st, const Point& x) {
  if (st.kind == SparsityKind::LowRank) {
    if (!x.is_matrix() || x.rows() != st.mat_rows || x.cols() != st.mat_cols)
      throw DimensionError("sparsify: matrix shape does not match structure");
  } else if (x.is_matrix() || x.size() != st.dim) {
    throw DimensionError("sparsify: vector shape does not match structure");
  }
}

}  // namespace

Point sparsify_point(const SparsityStructure& structure, const Point& x) {
  check_shape(structure, x);
  switch (structure.kind) {
    case SparsityKind::Vanilla:
      return truncate_vanilla(structure, x);
    case SparsityKind::Group:
      return truncate_group(structure, x);
    case SparsityKind::LowRank:
      return truncate_rank(structure, x);
  }
  throw std::invalid_argument("unknown sparsity kind");
}

std::pair<double, double> sparsify_error(const SparsityStructure& structure, const Point& x,
                                         const Point& x_star) {
  check_shape(structure, x);
  x.require_same_shape(x_star);
  if (!structure.is_sparse(x_star, structure.s, 1e-12))
    throw std::invalid_argument("sparsify_error: reference point is not s-sparse");
  const Point xs = sparsify_point(structure, x);
  const Point diff = xs - x_star;
  return {diff.l2(), structure.structural_norm(diff)};
}

}  // namespace sparsemd

#include "sparsemd/norms.hpp"

#include <Eigen/SVD>

namespace sparsemd {

Eigen::VectorXd singular_values(const Point& x) {
  if (!x.is_matrix()) throw DimensionError("singular values require a matrix point");
  // Full dense SVD; exact at the matrix sizes this library targets.
  if (x.rows() >= 16 && x.cols() >= 16) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(x.mat());
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.mat());
  return svd.singularValues();
}

double norm_eval(const Point& x, Norm which) {
  switch (which) {
    case Norm::L1:
      return x.flat().lpNorm<1>();
    case Norm::L2:
      return x.flat().norm();
    case Norm::LInf:
      return x.size() == 0 ? 0.0 : x.flat().lpNorm<Eigen::Infinity>();
    case Norm::Nuclear:
      return singular_values(x).sum();
    case Norm::Spectral: {
      const Eigen::VectorXd sv = singular_values(x);
      return sv.size() == 0 ? 0.0 : sv(0);
    }
  }
  throw std::invalid_argument("unknown norm");
}

double block_norm(const Point& x, const std::vector<std::vector<Eigen::Index>>& partition) {
  const auto flat = x.flat();
  double total = 0.0;
  for (const auto& block : partition) {
    double sq = 0.0;
    for (Eigen::Index i : block) {
      if (i < 0 || i >= flat.size()) throw DimensionError("partition index out of range");
      sq += flat(i) * flat(i);
    }
    total += std::sqrt(sq);
  }
  return total;
}

double sigma_norm(const Point& x, const Eigen::VectorXd& sigma_diag) {
  if (x.size() != sigma_diag.size())
    throw DimensionError("sigma norm: covariance dimension mismatch");
  if ((sigma_diag.array() < 0.0).any())
    throw std::invalid_argument("sigma norm: covariance must be positive semidefinite");
  return std::sqrt(x.flat().cwiseProduct(sigma_diag.cwiseProduct(x.flat())).sum());
}

std::vector<long> split_sample(long total_budget, int parts) {
  if (parts < 1) throw std::invalid_argument("split_sample: parts must be >= 1");
  if (total_budget < parts)
    throw std::invalid_argument("split_sample: budget smaller than number of parts");
  return std::vector<long>(static_cast<std::size_t>(parts), total_budget / parts);
}

}  // namespace sparsemd

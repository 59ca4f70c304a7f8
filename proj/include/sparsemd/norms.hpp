#pragma once

#include <vector>

#include "sparsemd/point.hpp"

namespace sparsemd {

enum class Norm { L1, L2, LInf, Nuclear, Spectral };

double norm_eval(const Point& x, Norm which);

// Block l1/l2 norm: sum over blocks of the block l2 norms. The partition must
// consist of disjoint index sets covering 0..n-1.
double block_norm(const Point& x, const std::vector<std::vector<Eigen::Index>>& partition);

// ||x||_Sigma = sqrt(x' diag(sigma_diag) x) for vector points.
double sigma_norm(const Point& x, const Eigen::VectorXd& sigma_diag);

// Singular values of a matrix point, descending.
Eigen::VectorXd singular_values(const Point& x);

// Budgets for splitting a sample into equal parts; the remainder is dropped
// so that the parts stay identically distributed.
std::vector<long> split_sample(long total_budget, int parts);

}  // namespace sparsemd

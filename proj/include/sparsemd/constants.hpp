#pragma once

#include <stdexcept>

namespace sparsemd {

// Problem constants consumed by the multistage schedules. varkappa/nu bound
// the oracle variance transfer, sigma_star_sq is the gradient noise at the
// optimum, lowkap the quadratic-growth modulus, s_bar the sparsity bound,
// radius an upper bound on the structural-norm distance from the start to
// the optimum, and theta the quadratic growth constant of the prox setup.
struct AlgoConstants {
  double varkappa = 1.0;        // >= 1
  double varkappa_prime = 1.0;  // >= 1
  double nu = 1.0;              // smoothness scale, nu >= L
  double sigma_star_sq = 0.0;   // >= 0
  double lowkap = 1.0;          // > 0
  long s_bar = 1;               // >= 1
  double radius = 1.0;          // R > 0
  double theta = 0.5;           // >= 1/2

  void validate() const {
    if (varkappa < 1.0 || varkappa_prime < 1.0)
      throw std::invalid_argument("constants: varkappa and varkappa' must be >= 1");
    if (nu <= 0.0) throw std::invalid_argument("constants: nu must be positive");
    if (sigma_star_sq < 0.0)
      throw std::invalid_argument("constants: sigma_star^2 must be nonnegative");
    if (lowkap <= 0.0) throw std::invalid_argument("constants: lowkap must be positive");
    if (s_bar < 1) throw std::invalid_argument("constants: s_bar must be >= 1");
    if (radius <= 0.0) throw std::invalid_argument("constants: radius must be positive");
    if (theta < 0.5) throw std::invalid_argument("constants: theta must be >= 1/2");
  }
};

}  // namespace sparsemd

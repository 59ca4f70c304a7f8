#pragma once

#include <map>
#include <string>

#include "sparsemd/oracle.hpp"
#include "sparsemd/point.hpp"

namespace sparsemd {

struct SparsityStructure;

// Error metrics of x against x_star, with fixed snake_case keys:
//   l2_error      ||x - x*||_2
//   struct_error  structural norm of the error (l1 / block / nuclear)
//   sigma_error   ||x - x*||_Sigma when the model exposes its covariance
//   objective_gap g(x) - g* when the model provides it exactly
// Metrics that are unavailable are simply omitted from the map.
std::map<std::string, double> risk_metrics(const Point& x, const Point& x_star,
                                           const StochasticOracle* model = nullptr,
                                           const SparsityStructure* structure = nullptr);

}  // namespace sparsemd

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "sparsemd/point.hpp"
#include "sparsemd/rng.hpp"

namespace sparsemd {

struct GradientSample {
  Point gradient;
  long sample_cost = 1;    // oracle queries consumed
  double step_scale = 1.0; // ||phi||_inf^2 (or squared spectral norm) of the draw
};

// Gradient of G(., omega) for one fixed draw omega, evaluable at any point.
using GradientField = std::function<Point(const Point&)>;

// Stochastic first-order oracle: draws omega ~ P and evaluates grad G(x, omega),
// an unbiased estimate of grad g(x). Synthetic models additionally expose exact
// error metrics so runs can be traced against the known optimum.
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;

  virtual Point zero() const = 0;

  // Fresh draw evaluated at x. step_scale is only filled when requested
  // (matrix oracles would otherwise pay for a spectral norm per call).
  virtual GradientSample sample_gradient(const Point& x, RngStream& rng,
                                         bool want_step_scale = false) const = 0;

  // One draw as a reusable gradient field. Used by aggregation procedures
  // that evaluate the same omega at several points.
  virtual GradientField sample_field(RngStream& rng) const {
    (void)rng;
    throw std::logic_error("oracle does not support shared-sample gradient fields");
  }

  // Exact g(x) - g* when available in closed form.
  virtual std::optional<double> exact_gap(const Point& x) const {
    (void)x;
    return std::nullopt;
  }

  // || . ||_Sigma of a displacement when the oracle knows its covariance.
  virtual std::optional<double> sigma_norm_of(const Point& diff) const {
    (void)diff;
    return std::nullopt;
  }

  virtual const Point* optimum() const { return nullptr; }

  // Error metrics of x against the known optimum; empty when unavailable.
  virtual std::map<std::string, double> metrics(const Point& x) const;
};

}  // namespace sparsemd

#include "sparsemd/metrics.hpp"

#include "sparsemd/norms.hpp"
#include "sparsemd/sparsify.hpp"

namespace sparsemd {

std::map<std::string, double> risk_metrics(const Point& x, const Point& x_star,
                                           const StochasticOracle* model,
                                           const SparsityStructure* structure) {
  x.require_same_shape(x_star);
  const Point diff = x - x_star;

  std::map<std::string, double> out;
  out["l2_error"] = diff.l2();
  if (structure)
    out["struct_error"] = structure->structural_norm(diff);
  else
    out["struct_error"] = norm_eval(diff, x.is_matrix() ? Norm::Nuclear : Norm::L1);
  if (model) {
    if (auto se = model->sigma_norm_of(diff)) out["sigma_error"] = *se;
    if (auto gap = model->exact_gap(x)) out["objective_gap"] = *gap;
  }
  return out;
}

std::map<std::string, double> StochasticOracle::metrics(const Point& x) const {
  const Point* star = optimum();
  if (!star) return {};
  return risk_metrics(x, *star, this);
}

}  // namespace sparsemd

#pragma once

#include <utility>
#include <vector>

#include "sparsemd/oracle.hpp"
#include "sparsemd/smd_sr.hpp"

namespace sparsemd {

struct ReplicaSet {
  std::vector<Point> points;
  std::vector<long> budgets;  // per-replica oracle calls (informational)

  std::size_t size() const { return points.size(); }
};

// Selection rules over independent replicas. The replica counts they need for
// a target confidence differ: L = ceil(alpha * ln(1/eps)) with alpha 10,
// 58.46 and 12.05 respectively.
enum class Selector { GeoMedian, Medoid, OrderStat };

long replica_count(Selector selector, double epsilon);

// Weiszfeld iteration with anchor-singularity handling; minimizes the summed
// Euclidean distances to within tol on the objective.
Point geometric_median(const ReplicaSet& replicas, double tol = 1e-10);

// The input point minimizing summed distances to the others; ties -> lowest index.
std::pair<int, Point> medoid_select(const ReplicaSet& replicas);

struct OrderStatResult {
  int index = 0;
  Point point;
  double radius = 0.0;  // achieved order-statistic distance
};

// For each point take the (floor(L/2)+1)-th smallest distance to the other
// points and pick the minimizer.
OrderStatResult order_stat_select(const ReplicaSet& replicas);

struct ReliableRunResult {
  Point x_bar;
  Point y_bar;
  RunTrace trace;
  ReplicaSet replicas;
};

// Split the budget across L independent runs, apply the selector to the
// averaged outputs, and sparsify the winner.
ReliableRunResult reliable_run(const StochasticOracle& oracle, const ProxSetup& setup,
                               const SparsityStructure& structure, const SmdSrConfig& cfg,
                               double epsilon, Selector selector, RngStream& rng);

// Median-of-means estimate of g(x_i) - g(x_j): per group, the average of m
// directional gradient samples at the midpoint quadrature nodes t_k = (2k-1)/(2m)
// along the segment from x_j to x_i; then the median over `groups` groups.
double robust_gap_estimate(const StochasticOracle& oracle, const Point& xi, const Point& xj,
                           long m, int groups, RngStream& rng);

struct AggregationConfig {
  double epsilon = 0.1;    // in (0, 1/2]
  int groups = 21;         // L' >= ceil(7 ln(2/epsilon))
  long group_size = 1;     // m; the second sample has K = m * L' observations
  double lipschitz_l2 = 1.0;  // L2, Euclidean Lipschitz constant of grad g
  double chi = 1.0;
  double chi_prime = 1.0;
  double sigma_star = 0.0;
  double tau_m = 0.0;

  void validate() const;
  double gamma(double r) const;  // admissibility threshold scale
  double rho(double r) const;    // comparison margin for replicas at distance r
};

// tau_M filled from the per-replica risk bound with unit absolute constants.
double aggregation_tau_m(const AlgoConstants& c, long replica_budget);

// Comparison-based selection: estimate pairwise objective gaps over the
// majority neighborhood of the order-statistic winner with fresh shared
// samples, and return the first replica never measurably worse than another.
std::pair<int, Point> aggregate_select(const ReplicaSet& replicas,
                                       const StochasticOracle& oracle,
                                       const AggregationConfig& cfg, RngStream& rng);

}  // namespace sparsemd

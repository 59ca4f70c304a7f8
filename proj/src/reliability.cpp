#include "sparsemd/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsemd/metrics.hpp"
#include "sparsemd/norms.hpp"

namespace sparsemd {

long replica_count(Selector selector, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 0.5)
    throw std::invalid_argument("replica_count: epsilon must lie in (0, 1/2]");
  double alpha = 10.0;
  if (selector == Selector::Medoid) alpha = 58.46;
  if (selector == Selector::OrderStat) alpha = 12.05;
  return std::max<long>(1, static_cast<long>(std::ceil(alpha * std::log(1.0 / epsilon))));
}

Point geometric_median(const ReplicaSet& replicas, double tol) {
  const auto L = replicas.size();
  if (L == 0) throw std::invalid_argument("geometric_median: empty replica set");
  if (L == 1) return replicas.points[0];
  for (std::size_t l = 1; l < L; ++l)
    replicas.points[0].require_same_shape(replicas.points[l]);

  auto objective = [&](const Point& x) {
    double s = 0.0;
    for (const auto& a : replicas.points) s += (x - a).l2();
    return s;
  };

  Point centroid = Point::zeros_like(replicas.points[0]);
  for (const auto& a : replicas.points) centroid += a;
  centroid *= 1.0 / static_cast<double>(L);
  double scale = 0.0;
  for (const auto& a : replicas.points) scale += (a - centroid).l2();
  scale = scale / static_cast<double>(L) + 1e-300;

  Point x = centroid;
  double obj = objective(x);
  const long max_iters = 10000;
  bool converged = false;
  for (long it = 0; it < max_iters; ++it) {
    // distances and possible anchor hit
    std::vector<double> dist(L);
    int hit = -1;
    for (std::size_t l = 0; l < L; ++l) {
      dist[l] = (x - replicas.points[l]).l2();
      if (dist[l] < 1e-12 * scale && hit < 0) hit = static_cast<int>(l);
    }
    if (hit >= 0) {
      // At an anchor the optimality test is on the summed unit directions of
      // the remaining points; if it fails, step off along the descent
      // direction and continue.
      Point g = Point::zeros_like(x);
      for (std::size_t l = 0; l < L; ++l) {
        if (static_cast<int>(l) == hit) continue;
        const Point diff = replicas.points[hit] - replicas.points[l];
        const double dl = diff.l2();
        if (dl > 0.0) g += (1.0 / dl) * diff;
      }
      if (g.l2() <= 1.0 + 1e-12) return replicas.points[hit];
      x = replicas.points[hit] - (1e-6 * scale / g.l2()) * g;
      obj = objective(x);
      continue;
    }
    Point num = Point::zeros_like(x);
    double den = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      num += (1.0 / dist[l]) * replicas.points[l];
      den += 1.0 / dist[l];
    }
    Point next = (1.0 / den) * num;
    const double next_obj = objective(next);
    const double decrease = obj - next_obj;
    x = std::move(next);
    obj = next_obj;
    if (decrease >= 0.0 && decrease <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericError("geometric_median: Weiszfeld iteration did not converge", obj, max_iters);

  // The true median never beats the best input by definition of the argmin
  // over the whole space, but the iterate is only tol-accurate; never return
  // something worse than an input point.
  int best = 0;
  double best_obj = objective(replicas.points[0]);
  for (std::size_t l = 1; l < L; ++l) {
    const double o = objective(replicas.points[l]);
    if (o < best_obj) {
      best_obj = o;
      best = static_cast<int>(l);
    }
  }
  return best_obj < obj ? replicas.points[best] : x;
}

std::pair<int, Point> medoid_select(const ReplicaSet& replicas) {
  const auto L = replicas.size();
  if (L == 0) throw std::invalid_argument("medoid_select: empty replica set");
  // Cache pairwise distances; sums reuse the symmetric halves.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(L, L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i + 1; j < L; ++j)
      d(i, j) = d(j, i) = (replicas.points[i] - replicas.points[j]).l2();
  int best = 0;
  double best_sum = d.row(0).sum();
  for (std::size_t i = 1; i < L; ++i) {
    const double s = d.row(i).sum();
    if (s < best_sum) {
      best_sum = s;
      best = static_cast<int>(i);
    }
  }
  return {best, replicas.points[best]};
}

OrderStatResult order_stat_select(const ReplicaSet& replicas) {
  const auto L = replicas.size();
  if (L < 2) throw std::invalid_argument("order_stat_select: need at least two replicas");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(L, L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i + 1; j < L; ++j)
      d(i, j) = d(j, i) = (replicas.points[i] - replicas.points[j]).l2();

  // rank of the order statistic: smallest integer strictly greater than L/2,
  // clamped to the L-1 available distances
  const std::size_t rank = std::min(L / 2 + 1, L - 1);
  int best = 0;
  double best_r = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    std::vector<double> row;
    row.reserve(L - 1);
    for (std::size_t j = 0; j < L; ++j)
      if (j != i) row.push_back(d(i, j));
    std::nth_element(row.begin(), row.begin() + (rank - 1), row.end());
    const double r = row[rank - 1];
    if (i == 0 || r < best_r) {
      best_r = r;
      best = static_cast<int>(i);
    }
  }
  return {best, replicas.points[best], best_r};
}

ReliableRunResult reliable_run(const StochasticOracle& oracle, const ProxSetup& setup,
                               const SparsityStructure& structure, const SmdSrConfig& cfg,
                               double epsilon, Selector selector, RngStream& rng) {
  const long L = replica_count(selector, epsilon);
  if (cfg.total_budget < L)
    throw std::invalid_argument("reliable_run: budget below replica count L = " +
                                std::to_string(L));
  const std::vector<long> budgets = split_sample(cfg.total_budget, static_cast<int>(L));

  SmdSrConfig replica_cfg = cfg;
  replica_cfg.total_budget = budgets[0];

  ReliableRunResult out;
  out.replicas.points.reserve(L);
  out.replicas.budgets = budgets;
  long calls = 0;
  for (long l = 0; l < L; ++l) {
    RngStream stream = rng.substream(static_cast<std::uint64_t>(l) + 1);
    SmdSrResult r = run_smd_sr(oracle, setup, structure, replica_cfg, stream);
    calls += r.trace.empty() ? budgets[0] : r.trace.back().oracle_calls;
    RunTrace::Record rec;
    rec.oracle_calls = calls;
    rec.stage_id = static_cast<int>(l) + 1;
    rec.phase = Phase::Asymptotic;
    rec.metrics = oracle.metrics(r.x_hat);
    out.trace.append(std::move(rec));
    out.replicas.points.push_back(std::move(r.x_hat));
  }

  switch (selector) {
    case Selector::GeoMedian:
      out.x_bar = geometric_median(out.replicas, 1e-10);
      break;
    case Selector::Medoid:
      out.x_bar = medoid_select(out.replicas).second;
      break;
    case Selector::OrderStat:
      out.x_bar = order_stat_select(out.replicas).point;
      break;
  }
  out.y_bar = sparsify_point(structure, out.x_bar);
  return out;
}

double robust_gap_estimate(const StochasticOracle& oracle, const Point& xi, const Point& xj,
                           long m, int groups, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("robust_gap_estimate: m must be >= 1");
  if (groups < 1) throw std::invalid_argument("robust_gap_estimate: groups must be >= 1");
  xi.require_same_shape(xj);
  const Point dir = xi - xj;

  std::vector<double> group_means(groups);
  for (int g = 0; g < groups; ++g) {
    double sum = 0.0;
    for (long k = 1; k <= m; ++k) {
      const double t = (2.0 * static_cast<double>(k) - 1.0) / (2.0 * static_cast<double>(m));
      const Point at = xj + t * dir;
      sum += oracle.sample_gradient(at, rng, false).gradient.dot(dir);
    }
    group_means[g] = sum / static_cast<double>(m);
  }
  std::sort(group_means.begin(), group_means.end());
  const int mid = groups / 2;
  return groups % 2 ? group_means[mid] : 0.5 * (group_means[mid - 1] + group_means[mid]);
}

void AggregationConfig::validate() const {
  if (!(epsilon > 0.0) || epsilon > 0.5)
    throw std::invalid_argument("aggregation: epsilon must lie in (0, 1/2]");
  const int min_groups = static_cast<int>(std::ceil(7.0 * std::log(2.0 / epsilon)));
  if (groups < min_groups)
    throw std::invalid_argument("aggregation: groups must be >= " + std::to_string(min_groups));
  if (group_size < 1) throw std::invalid_argument("aggregation: group size must be >= 1");
  if (lipschitz_l2 < 0.0 || chi < 0.0 || chi_prime < 0.0 || sigma_star < 0.0 || tau_m < 0.0)
    throw std::invalid_argument("aggregation: constants must be nonnegative");
}

double AggregationConfig::gamma(double r) const {
  const double md = static_cast<double>(group_size);
  const double a = 4.0 * r * std::sqrt(chi * lipschitz_l2 / md) + tau_m;
  return std::sqrt(a * a + 4.0 * r * sigma_star * std::sqrt(chi_prime / md));
}

double AggregationConfig::rho(double r) const {
  const double md = static_cast<double>(group_size);
  return 2.0 * r * std::sqrt(lipschitz_l2 * chi / md) * (gamma(r) + tau_m) +
         2.0 * r * sigma_star * std::sqrt(chi_prime / md);
}

double aggregation_tau_m(const AlgoConstants& c, long replica_budget) {
  c.validate();
  if (replica_budget < 1) throw std::invalid_argument("tau_m: budget must be >= 1");
  const double m = static_cast<double>(replica_budget);
  const double s = static_cast<double>(c.s_bar);
  const double preliminary =
      c.lowkap * c.radius * c.radius / s *
      std::exp(-m * c.lowkap / (c.theta * c.varkappa * s * c.nu));
  const double asymptotic =
      c.sigma_star_sq * s * c.varkappa_prime * c.theta / (c.lowkap * m);
  return std::sqrt(preliminary + asymptotic);
}

std::pair<int, Point> aggregate_select(const ReplicaSet& replicas,
                                       const StochasticOracle& oracle,
                                       const AggregationConfig& cfg, RngStream& rng) {
  cfg.validate();
  const auto L = replicas.size();
  if (L == 0) throw std::invalid_argument("aggregate_select: empty replica set");
  if (L == 1) return {0, replicas.points[0]};

  const OrderStatResult sel = order_stat_select(replicas);

  // majority neighborhood of the winner, by distance with lowest-index ties
  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(L);
  for (std::size_t j = 0; j < L; ++j)
    dist[j] = (replicas.points[j] - replicas.points[sel.index]).l2();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
  });
  const std::size_t take = std::min(L / 2 + 1, L);
  std::vector<std::size_t> hood(order.begin(), order.begin() + take);
  std::sort(hood.begin(), hood.end());

  // One shared second sample of K = m * L' draws, reused across comparisons.
  const long m = cfg.group_size;
  std::vector<std::vector<GradientField>> fields(cfg.groups);
  for (auto& group : fields) {
    group.reserve(m);
    for (long k = 0; k < m; ++k) group.push_back(oracle.sample_field(rng));
  }

  auto gap_estimate = [&](std::size_t j, std::size_t i) {
    // median over groups of the quadrature averages along x_j -> x_i
    const Point dir = replicas.points[i] - replicas.points[j];
    std::vector<double> means(cfg.groups);
    for (int g = 0; g < cfg.groups; ++g) {
      double sum = 0.0;
      for (long k = 1; k <= m; ++k) {
        const double t = (2.0 * k - 1.0) / (2.0 * m);
        sum += fields[g][k - 1](replicas.points[j] + t * dir).dot(dir);
      }
      means[g] = sum / static_cast<double>(m);
    }
    std::sort(means.begin(), means.end());
    const int mid = cfg.groups / 2;
    return cfg.groups % 2 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
  };

  int chosen = -1;
  for (std::size_t i : hood) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j : hood) {
      if (j == i) continue;
      const double r = (replicas.points[i] - replicas.points[j]).l2();
      worst = std::max(worst, gap_estimate(j, i) - cfg.rho(r));
    }
    if (worst <= 0.0) {
      chosen = static_cast<int>(i);
      break;
    }
  }
  if (chosen < 0) chosen = 0;
  return {chosen, replicas.points[chosen]};
}

}  // namespace sparsemd

#include "cpa/cutting_plane.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cpa/log.hpp"

namespace cpa {

double relative_gap_value(double incumbent, double lower) {
  return (incumbent - lower) / (1.0 + std::min(std::abs(incumbent), std::abs(lower)));
}

double relative_gap(const Vector& c, const Vector& x_best, const ConvexBody& body,
                    double lower_bound_tol) {
  const LowerBound l = lower_bound(body, c, lower_bound_tol);
  return relative_gap_value(c.dot(x_best), l.value);
}

Vector dikin_relevance(const ConvexBody& body, const Vector& x_star) {
  if (!body.strictly_contains(x_star)) {
    throw ContractError("dikin_relevance: point is not in the interior of the body");
  }
  const Matrix h = barrier_hessian(body, x_star);
  const Vector slack = body.linear_slacks(x_star);
  const Eigen::Index m = body.num_constraints();
  Vector eta(m);
  Eigen::LLT<Matrix> llt(h);
  const bool factored = llt.info() == Eigen::Success;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vector& a = body.normal(i);
    const Vector v = factored ? Vector(llt.solve(a)) : solve_pd(h, a).solution;
    eta(i) = slack(i) / std::sqrt(a.dot(v));
  }
  return eta;
}

PruneResult prune(const ConvexBody& body, const Vector& x_star, Eigen::Index m_max) {
  const Eigen::Index m = body.num_constraints();
  if (m <= body.dim()) return {body, {}};

  Vector eta;
  try {
    eta = dikin_relevance(body, x_star);
  } catch (const SingularityError& e) {
    log::info(std::string("prune: skipped, ") + e.what());
    return {body, {}};
  }

  // m stays at its pre-prune value for both phases.
  const double threshold = static_cast<double>(m + 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(eta(i) >= threshold)) keep.push_back(i);

  if (static_cast<Eigen::Index>(keep.size()) > m_max) {
    std::stable_sort(keep.begin(), keep.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return eta(a) < eta(b); });
    keep.resize(static_cast<std::size_t>(m_max));
    std::sort(keep.begin(), keep.end());
  }

  std::vector<Eigen::Index> removed;
  std::size_t next = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (next < keep.size() && keep[next] == i) {
      ++next;
    } else {
      removed.push_back(i);
    }
  }
  return {body.with_constraints(keep), std::move(removed)};
}

SolveResult accp_solve(const Vector& c, const Oracle& oracle, double radius,
                       const AccpConfig& config) {
  const Eigen::Index n = c.size();
  const double c_norm = c.norm();
  if (!(c_norm > 0.0)) throw ContractError("accp_solve: objective must be nonzero");
  if (!(config.epsilon > 0.0)) throw ContractError("accp_solve: epsilon must be positive");
  const Eigen::Index m_max = config.m_max > 0 ? config.m_max : 3 * n;
  if (m_max < n + 1) throw ContractError("accp_solve: m_max must be at least n + 1");
  const int max_iterations =
      config.max_iterations > 0 ? config.max_iterations : static_cast<int>(10 * n * n);

  ConvexBody body(n, radius);
  Vector x_prev = Vector::Zero(n);
  std::optional<Vector> best;
  double best_value = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  SolveTrace trace;

  auto finish = [&](double gap) {
    return SolveResult{*best, best_value, lower, gap, std::move(trace)};
  };

  for (int k = 1; k <= max_iterations; ++k) {
    if (config.observer) config.observer(k, body, best_value);
    IterationRecord rec;
    const CenterResult center = analytic_center(body, x_prev, config.center);
    rec.center_status = center.status;
    const Vector& x = center.x_star;
    const bool interior = body.strictly_contains(x);

    if (best) {
      const LowerBound lb = lower_bound(body, c, config.lower_bound_tol,
                                        interior ? std::optional<Vector>(x) : std::nullopt);
      lower = std::max(lower, lb.value);
      rec.lower_bound = lower;
      rec.gap = relative_gap_value(best_value, lower);
      if (rec.gap <= config.epsilon) {
        rec.constraints = body.num_constraints();
        trace.iterations.push_back(rec);
        log::info("accp: converged after " + std::to_string(trace.oracle_calls) +
                  " oracle calls, value " + std::to_string(best_value));
        return finish(rec.gap);
      }
    }

    if (center.status == CenterStatus::Failure && !interior) {
      rec.constraints = body.num_constraints();
      trace.iterations.push_back(rec);
      throw SolveError(SolveError::Kind::Geometry,
                       "accp: centering failed outside the interior of the outer approximation "
                       "(gradient norm " + std::to_string(center.grad_norm) + ")",
                       std::move(trace), best);
    }
    if (center.status == CenterStatus::Success) {
      body = prune(body, x, m_max).body;
    }
    rec.constraints = body.num_constraints();

    const OracleResponse answer = oracle(x);
    ++trace.oracle_calls;
    if (answer.feasible) {
      ++trace.feasible_hits;
      const double value = c.dot(x);
      rec.feasible = true;
      rec.objective = value;
      if (value < best_value) {
        best_value = value;
        best = x;
      }
      body.add_constraint(c, value);
    } else {
      body.add_constraint(answer.a, answer.b);
    }
    log::debug("accp: k=" + std::to_string(k) + (answer.feasible ? " feasible" : " cut") +
               " m=" + std::to_string(body.num_constraints()) +
               " gap=" + std::to_string(rec.gap));
    trace.iterations.push_back(rec);
    x_prev = x;
  }
  throw SolveError(SolveError::Kind::IterationCap,
                   "accp: iteration cap of " + std::to_string(max_iterations) + " reached",
                   std::move(trace), best);
}

}  // namespace cpa

#include <algorithm>
#include <cmath>
#include <string>

#include "cpa/cutting_plane.hpp"
#include "cpa/log.hpp"

namespace cpa {

Ellipsoid Ellipsoid::ball(Eigen::Index n, double radius) {
  return Ellipsoid{Vector::Zero(n), radius * radius * Matrix::Identity(n, n)};
}

double Ellipsoid::min_linear(const Vector& c) const {
  return c.dot(center) - std::sqrt(std::max(0.0, c.dot(shape * c)));
}

void Ellipsoid::cut(const Vector& a, double b) {
  const Eigen::Index n = center.size();
  const Vector pa = shape * a;
  const double apa = a.dot(pa);
  if (!(apa > 0.0) || !std::isfinite(apa)) {
    throw SolveError(SolveError::Kind::Collapse, "ellipsoid: shape matrix lost definiteness", {},
                     std::nullopt);
  }
  const double s = std::sqrt(apa);

  if (n == 1) {
    const double half = std::sqrt(shape(0, 0));
    double lo = center(0) - half;
    double hi = center(0) + half;
    const double bound = b / a(0);
    if (a(0) > 0.0) {
      hi = std::min(hi, bound);
    } else {
      lo = std::max(lo, bound);
    }
    if (!(hi > lo)) {
      throw SolveError(SolveError::Kind::Collapse, "ellipsoid: interval became empty", {},
                       std::nullopt);
    }
    center(0) = 0.5 * (lo + hi);
    shape(0, 0) = 0.25 * (hi - lo) * (hi - lo);
    return;
  }

  const double nd = static_cast<double>(n);
  double alpha = (a.dot(center) - b) / s;
  if (alpha < -1e-9) throw ContractError("ellipsoid: cut must not leave the center strictly feasible");
  alpha = std::clamp(alpha, 0.0, (1.0 / nd) * (1.0 - 1e-12));
  const Vector g = pa / s;
  center -= ((1.0 + nd * alpha) / (nd + 1.0)) * g;
  const double scale = nd * nd / (nd * nd - 1.0) * (1.0 - alpha * alpha);
  const double rank_one = 2.0 * (1.0 + nd * alpha) / ((nd + 1.0) * (1.0 + alpha));
  shape = scale * (shape - rank_one * g * g.transpose());
  shape = 0.5 * (shape + shape.transpose()).eval();
  Eigen::LLT<Matrix> llt(shape);
  if (llt.info() != Eigen::Success || !center.allFinite()) {
    throw SolveError(SolveError::Kind::Collapse, "ellipsoid: shape matrix lost definiteness", {},
                     std::nullopt);
  }
}

SolveResult ellipsoid_solve(const Vector& c, const Oracle& oracle, double radius,
                            const EllipsoidConfig& config) {
  const Eigen::Index n = c.size();
  if (!(c.norm() > 0.0)) throw ContractError("ellipsoid_solve: objective must be nonzero");
  if (!(config.epsilon > 0.0)) throw ContractError("ellipsoid_solve: epsilon must be positive");
  const int max_iterations = config.max_iterations > 0
                                 ? config.max_iterations
                                 : static_cast<int>(500 * n * n + 10000);

  Ellipsoid e = Ellipsoid::ball(n, radius);
  std::optional<Vector> best;
  double best_value = std::numeric_limits<double>::infinity();
  double lower = -radius * c.norm();
  SolveTrace trace;

  try {
    for (int k = 1; k <= max_iterations; ++k) {
      IterationRecord rec;
      rec.center_status = CenterStatus::Success;
      const Vector x = e.center;
      const double norm = x.norm();
      if (norm > radius) {
        e.cut(x / norm, radius);
      } else {
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
          e.cut(c, value);
        } else {
          e.cut(answer.a, answer.b);
        }
      }
      if (best) {
        lower = std::max(lower, e.min_linear(c));
        rec.lower_bound = lower;
        rec.gap = relative_gap_value(best_value, lower);
      }
      trace.iterations.push_back(rec);
      if (best && rec.gap <= config.epsilon) {
        log::info("ellipsoid: converged after " + std::to_string(trace.oracle_calls) +
                  " oracle calls, value " + std::to_string(best_value));
        return SolveResult{*best, best_value, lower, rec.gap, std::move(trace)};
      }
    }
  } catch (const SolveError& err) {
    throw SolveError(err.kind(), err.what(), std::move(trace), best);
  }
  throw SolveError(SolveError::Kind::IterationCap,
                   "ellipsoid: iteration cap of " + std::to_string(max_iterations) + " reached",
                   std::move(trace), best);
}

}  // namespace cpa

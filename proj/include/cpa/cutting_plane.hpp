#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cpa/analytic_center.hpp"

namespace cpa {

/// Answer of a separation oracle at a query point: either "feasible" or a
/// halfspace {x : a^T x <= b} that contains the feasible set but not the
/// query point.
struct OracleResponse {
  bool feasible = true;
  Vector a;
  double b = 0.0;

  static OracleResponse accept() { return {}; }
  static OracleResponse halfspace(Vector a, double b) { return {false, std::move(a), b}; }
};

using Oracle = std::function<OracleResponse(const Vector&)>;

struct AccpConfig {
  double epsilon = 1e-6;
  /// 0 selects 3n.
  Eigen::Index m_max = 0;
  /// 0 selects 10 n^2.
  int max_iterations = 0;
  double lower_bound_tol = 1e-8;
  CenterOptions center;
  /// Called at the start of iteration k with Q_k and the incumbent value
  /// (+inf before the first feasible point).
  std::function<void(int k, const ConvexBody& body, double incumbent)> observer;
};

struct IterationRecord {
  bool feasible = false;
  /// c^T x_k when the oracle accepted x_k, NaN otherwise.
  double objective = std::numeric_limits<double>::quiet_NaN();
  /// Running lower bound; -inf before the first feasible point.
  double lower_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  Eigen::Index constraints = 0;
  CenterStatus center_status = CenterStatus::Failure;
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;
  int oracle_calls = 0;
  int feasible_hits = 0;
};

struct SolveResult {
  Vector x_best;
  double value = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  SolveTrace trace;
};

/// Failure of a cutting-plane or ellipsoid run; carries everything computed
/// so far.
class SolveError : public Error {
 public:
  enum class Kind { Geometry, IterationCap, Collapse };

  SolveError(Kind kind, const std::string& what, SolveTrace trace, std::optional<Vector> best)
      : Error(what), kind_(kind), trace_(std::move(trace)), best_(std::move(best)) {}

  Kind kind() const { return kind_; }
  const SolveTrace& trace() const { return trace_; }
  const std::optional<Vector>& best() const { return best_; }

 private:
  Kind kind_;
  SolveTrace trace_;
  std::optional<Vector> best_;
};

/// (incumbent - l) / (1 + min(|incumbent|, |l|))
double relative_gap_value(double incumbent, double lower);

/// Relative gap of x_best against the certified lower bound over `body`.
double relative_gap(const Vector& c, const Vector& x_best, const ConvexBody& body,
                    double lower_bound_tol = 1e-8);

/// Relevance eta_i = (b_i - a_i^T x) / sqrt(a_i^T H^{-1} a_i) with H the
/// barrier Hessian at x. For an accurate center every eta_i >= 1, and
/// eta_i >= m + 1 certifies that constraint i is redundant.
Vector dikin_relevance(const ConvexBody& body, const Vector& x_star);

struct PruneResult {
  ConvexBody body;
  std::vector<Eigen::Index> removed;
};

/// Drops constraints with eta_i >= m + 1 and then the largest-eta ones until
/// at most m_max remain. No-op when m <= n. The ball is never touched.
PruneResult prune(const ConvexBody& body, const Vector& x_star, Eigen::Index m_max);

/// Analytic center cutting plane method for min { c^T x : x in X, ||x|| <= r }.
/// Feasible centers add the normalized objective cut, infeasible ones the
/// normalized oracle halfspace; stops when the relative gap is <= epsilon.
///
/// Throws SolveError(Geometry) when centering fails at a point outside the
/// interior of the current body and SolveError(IterationCap) when the
/// iteration cap is hit.
SolveResult accp_solve(const Vector& c, const Oracle& oracle, double radius,
                       const AccpConfig& config = {});

/// Minimum-volume ellipsoid {x : (x - center)^T P^{-1} (x - center) <= 1}.
struct Ellipsoid {
  Vector center;
  Matrix shape;

  static Ellipsoid ball(Eigen::Index n, double radius);

  /// min c^T x over the ellipsoid.
  double min_linear(const Vector& c) const;

  /// Replaces the ellipsoid by the minimum-volume ellipsoid containing its
  /// intersection with {x : a^T x <= b}. The depth
  /// alpha = (a^T center - b) / sqrt(a^T P a) must be >= 0 (up to 1e-9) and
  /// is clamped to [0, 1/n); throws ContractError for a shallow cut and
  /// SolveError(Collapse) if P stops being positive definite.
  void cut(const Vector& a, double b);
};

struct EllipsoidConfig {
  double epsilon = 1e-6;
  /// 0 selects 500 n^2 + 10000.
  int max_iterations = 0;
};

/// Ellipsoid method baseline with the same termination rule as accp_solve;
/// the lower bound is the minimum of c^T x over the current ellipsoid.
/// Centers outside the ball are cut by the ball's tangent plane without an
/// oracle call.
SolveResult ellipsoid_solve(const Vector& c, const Oracle& oracle, double radius,
                            const EllipsoidConfig& config = {});

}  // namespace cpa

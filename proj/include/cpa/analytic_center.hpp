#pragma once

#include <optional>
#include <vector>

#include "cpa/linalg.hpp"

namespace cpa {

/// Q = { x : ||x||^2 <= r^2, a_i^T x <= b_i } with every a_i of unit norm.
class ConvexBody {
 public:
  ConvexBody(Eigen::Index dim, double radius);

  Eigen::Index dim() const { return dim_; }
  double radius() const { return radius_; }
  Eigen::Index num_constraints() const { return static_cast<Eigen::Index>(b_.size()); }

  /// Adds a^T x <= b after dividing both sides by ||a||. Throws ContractError
  /// for a zero normal.
  void add_constraint(const Vector& a, double b);

  /// Keeps only the constraints whose index is listed (in the given order).
  ConvexBody with_constraints(const std::vector<Eigen::Index>& keep) const;

  /// Constraint normals as rows (m x n).
  Matrix normals() const;
  Vector offsets() const;

  const Vector& normal(Eigen::Index i) const { return a_[static_cast<std::size_t>(i)]; }
  double offset(Eigen::Index i) const { return b_[static_cast<std::size_t>(i)]; }

  /// r^2 - ||x||^2
  double ball_slack(const Vector& x) const;
  /// b - A x
  Vector linear_slacks(const Vector& x) const;
  /// Every slack strictly positive.
  bool strictly_contains(const Vector& x) const;
  /// Every slack >= -tol.
  bool contains(const Vector& x, double tol = 0.0) const;

 private:
  Eigen::Index dim_;
  double radius_;
  std::vector<Vector> a_;
  std::vector<double> b_;
};

/// Log barrier  Phi(x) = -log(r^2 - ||x||^2) - sum_i log(b_i - a_i^T x).
double barrier_value(const ConvexBody& body, const Vector& x);
Vector barrier_gradient(const ConvexBody& body, const Vector& x);
Matrix barrier_hessian(const ConvexBody& body, const Vector& x);

/// Primal-dual iterate of the slack formulation of the centering problem.
struct NewtonState {
  Vector x;
  double s_r = 1.0;
  Vector s_a;
  double lambda_r = 1.0;
  Vector lambda_a;
};

struct NewtonStep {
  Vector dx;
  double ds_r = 0.0;
  Vector ds_a;
  double dlambda_r = 0.0;
  Vector dlambda_a;
};

/// state + t * step
NewtonState advance(const NewtonState& state, const NewtonStep& step, double t);

/// Gradient of the Lagrangian
///   L = -log s_r - sum log s_a + lambda_r (s_r - r^2 + ||x||^2)
///       + lambda_a^T (s_a - b + A x)
/// stacked as (x, s_r, s_a, lambda_r, lambda_a) blocks.
Vector lagrangian_gradient(const NewtonState& state, const ConvexBody& body);

/// Newton step for the stationarity system of the Lagrangian. The x-block is
/// obtained from the reduced positive definite system
///   [2 lambda_r I + 4/s_r^2 x x^T + A^T diag(s_a^-2) A] dx
///     = 2x (r^2 - ||x||^2 - 2 s_r) / s_r^2 + A^T diag(s_a^-2) (b - A x - 2 s_a),
/// the other blocks by back substitution. Requires lambda_r > 0.
NewtonStep newton_step(const NewtonState& state, const ConvexBody& body);

enum class CenterStatus { Success, Failure };

struct CenterOptions {
  int max_iterations = 50;
  double gradient_tol = 1e-8;
  double damping = 0.9;
  /// Start the ball multiplier at -1 instead of +1.
  bool negative_ball_multiplier_init = false;
};

struct CenterResult {
  Vector x_star;
  CenterStatus status = CenterStatus::Failure;
  double grad_norm = 0.0;
  int iterations = 0;
  /// Iterate the result was taken from.
  NewtonState state;
  /// Gradient norm before every step; the method is not monotone.
  std::vector<double> grad_trace;
};

/// Infeasible-start Newton method for the analytic center of `body`.
/// Never throws for non-convergence: a Failure status carries the iterate
/// with the smallest gradient norm seen.
CenterResult analytic_center(const ConvexBody& body, const Vector& x0,
                             const CenterOptions& options = {});

enum class BoundSource { PathFollowing, BoxRelaxation, Ball };

struct LowerBound {
  double value = 0.0;
  BoundSource source = BoundSource::Ball;
};

/// Certified l <= min { c^T x : x in body }.
///
/// Follows the central path of t c^T x + Phi(x) for t = 1, 10, 100, ...
/// At every centered point the multipliers u_r = 1/(t s_r), u_i = 1/(t s_i)
/// are plugged into the closed-form Lagrangian dual
///   g(u) = -||c + A^T u||^2 / (4 u_r) - u_r r^2 - b^T u,
/// which is a valid bound regardless of centering accuracy. Stops once
/// c^T x - l <= tol (1 + |l|). Falls back to the LP over the bounding box
/// intersected with the polyhedron, then to -r ||c||.
LowerBound lower_bound(const ConvexBody& body, const Vector& c, double tol,
                       const std::optional<Vector>& interior_point = std::nullopt);

}  // namespace cpa

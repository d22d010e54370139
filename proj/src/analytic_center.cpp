#include "cpa/analytic_center.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpa/log.hpp"
#include "cpa/simplex_lp.hpp"

namespace cpa {

ConvexBody::ConvexBody(Eigen::Index dim, double radius) : dim_(dim), radius_(radius) {
  if (dim < 1) throw DimensionError("ConvexBody: dimension must be at least 1");
  if (!(radius > 0.0)) throw ContractError("ConvexBody: radius must be positive");
}

void ConvexBody::add_constraint(const Vector& a, double b) {
  if (a.size() != dim_) throw DimensionError("ConvexBody: constraint normal has wrong length");
  const double norm = a.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ContractError("ConvexBody: constraint normal must be nonzero and finite");
  }
  a_.push_back(a / norm);
  b_.push_back(b / norm);
}

ConvexBody ConvexBody::with_constraints(const std::vector<Eigen::Index>& keep) const {
  ConvexBody out(dim_, radius_);
  out.a_.reserve(keep.size());
  out.b_.reserve(keep.size());
  for (Eigen::Index i : keep) {
    out.a_.push_back(a_.at(static_cast<std::size_t>(i)));
    out.b_.push_back(b_.at(static_cast<std::size_t>(i)));
  }
  return out;
}

Matrix ConvexBody::normals() const {
  Matrix a(num_constraints(), dim_);
  for (Eigen::Index i = 0; i < num_constraints(); ++i) a.row(i) = normal(i).transpose();
  return a;
}

Vector ConvexBody::offsets() const {
  return Eigen::Map<const Vector>(b_.data(), static_cast<Eigen::Index>(b_.size()));
}

double ConvexBody::ball_slack(const Vector& x) const {
  return radius_ * radius_ - x.squaredNorm();
}

Vector ConvexBody::linear_slacks(const Vector& x) const {
  Vector s(num_constraints());
  for (Eigen::Index i = 0; i < num_constraints(); ++i) s(i) = offset(i) - normal(i).dot(x);
  return s;
}

bool ConvexBody::strictly_contains(const Vector& x) const {
  if (!(ball_slack(x) > 0.0)) return false;
  for (Eigen::Index i = 0; i < num_constraints(); ++i)
    if (!(offset(i) - normal(i).dot(x) > 0.0)) return false;
  return true;
}

bool ConvexBody::contains(const Vector& x, double tol) const {
  if (ball_slack(x) < -tol) return false;
  for (Eigen::Index i = 0; i < num_constraints(); ++i)
    if (offset(i) - normal(i).dot(x) < -tol) return false;
  return true;
}

double barrier_value(const ConvexBody& body, const Vector& x) {
  const double sr = body.ball_slack(x);
  const Vector s = body.linear_slacks(x);
  if (!(sr > 0.0) || (s.size() > 0 && !(s.minCoeff() > 0.0))) {
    return std::numeric_limits<double>::infinity();
  }
  return -std::log(sr) - s.array().log().sum();
}

Vector barrier_gradient(const ConvexBody& body, const Vector& x) {
  const double sr = body.ball_slack(x);
  Vector g = (2.0 / sr) * x;
  for (Eigen::Index i = 0; i < body.num_constraints(); ++i) {
    g += body.normal(i) / (body.offset(i) - body.normal(i).dot(x));
  }
  return g;
}

Matrix barrier_hessian(const ConvexBody& body, const Vector& x) {
  const Eigen::Index n = body.dim();
  const double sr = body.ball_slack(x);
  Matrix h = (2.0 / sr) * Matrix::Identity(n, n) + (4.0 / (sr * sr)) * x * x.transpose();
  for (Eigen::Index i = 0; i < body.num_constraints(); ++i) {
    const double si = body.offset(i) - body.normal(i).dot(x);
    h.selfadjointView<Eigen::Lower>().rankUpdate(body.normal(i), 1.0 / (si * si));
  }
  return Matrix(h.selfadjointView<Eigen::Lower>());
}

NewtonState advance(const NewtonState& s, const NewtonStep& d, double t) {
  return NewtonState{s.x + t * d.dx, s.s_r + t * d.ds_r, s.s_a + t * d.ds_a,
                     s.lambda_r + t * d.dlambda_r, s.lambda_a + t * d.dlambda_a};
}

namespace {

void check_state(const NewtonState& state, const ConvexBody& body) {
  const Eigen::Index m = body.num_constraints();
  if (state.x.size() != body.dim() || state.s_a.size() != m || state.lambda_a.size() != m) {
    throw DimensionError("NewtonState: block sizes do not match the body");
  }
  if (!(state.s_r > 0.0) || (m > 0 && !(state.s_a.minCoeff() > 0.0))) {
    throw ContractError("NewtonState: slacks must be strictly positive");
  }
}

// The reduced system is positive definite only for lambda_r > 0; the
// literal -1 initialization needs an indefinite solve on its first step.
NewtonStep compute_step(const NewtonState& st, const ConvexBody& body, bool allow_indefinite) {
  const Eigen::Index n = body.dim();
  const Eigen::Index m = body.num_constraints();
  const double r2 = body.radius() * body.radius();
  const Matrix a = body.normals();
  const Vector b = body.offsets();
  const Vector inv_s2 = st.s_a.array().square().inverse();
  const double xx = st.x.squaredNorm();

  Matrix lhs = 2.0 * st.lambda_r * Matrix::Identity(n, n) +
               (4.0 / (st.s_r * st.s_r)) * st.x * st.x.transpose();
  Vector rhs = ((r2 - xx - 2.0 * st.s_r) / (st.s_r * st.s_r)) * 2.0 * st.x;
  if (m > 0) {
    lhs.noalias() += a.transpose() * inv_s2.asDiagonal() * a;
    rhs.noalias() += a.transpose() * (inv_s2.asDiagonal() * (b - a * st.x - 2.0 * st.s_a));
  }

  NewtonStep d;
  if (st.lambda_r > 0.0 || !allow_indefinite) {
    d.dx = solve_pd(lhs, rhs).solution;
  } else {
    Eigen::LDLT<Matrix> ldlt(lhs);
    if (ldlt.info() != Eigen::Success) throw SingularityError("newton_step: indefinite solve failed");
    d.dx = ldlt.solve(rhs);
    if (!d.dx.allFinite()) throw SingularityError("newton_step: indefinite solve failed");
  }
  d.ds_r = -st.s_r + r2 - xx - 2.0 * st.x.dot(d.dx);
  d.ds_a = -st.s_a + b - a * st.x - a * d.dx;
  d.dlambda_r = -st.lambda_r + 1.0 / st.s_r - d.ds_r / (st.s_r * st.s_r);
  d.dlambda_a = -st.lambda_a + st.s_a.cwiseInverse() - inv_s2.cwiseProduct(d.ds_a);
  return d;
}

// Largest t >= 0 keeping the positive components among s_r, s_a, lambda_r
// nonnegative (ratio test over decreasing components only).
double step_cap(const NewtonState& st, const NewtonStep& d) {
  double cap = std::numeric_limits<double>::infinity();
  if (d.ds_r < 0.0 && st.s_r > 0.0) cap = std::min(cap, st.s_r / -d.ds_r);
  for (Eigen::Index i = 0; i < st.s_a.size(); ++i) {
    if (d.ds_a(i) < 0.0 && st.s_a(i) > 0.0) cap = std::min(cap, st.s_a(i) / -d.ds_a(i));
  }
  if (d.dlambda_r < 0.0 && st.lambda_r > 0.0) cap = std::min(cap, st.lambda_r / -d.dlambda_r);
  return cap;
}

bool slacks_positive(const NewtonState& st) {
  return st.s_r > 0.0 && (st.s_a.size() == 0 || st.s_a.minCoeff() > 0.0);
}

}  // namespace

Vector lagrangian_gradient(const NewtonState& st, const ConvexBody& body) {
  check_state(st, body);
  const Eigen::Index n = body.dim();
  const Eigen::Index m = body.num_constraints();
  const double r2 = body.radius() * body.radius();
  Vector g(n + 1 + m + 1 + m);
  Vector gx = 2.0 * st.lambda_r * st.x;
  Vector gl(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    gx += st.lambda_a(i) * body.normal(i);
    gl(i) = st.s_a(i) - body.offset(i) + body.normal(i).dot(st.x);
  }
  g.segment(0, n) = gx;
  g(n) = -1.0 / st.s_r + st.lambda_r;
  g.segment(n + 1, m) = -st.s_a.cwiseInverse() + st.lambda_a;
  g(n + 1 + m) = st.s_r - r2 + st.x.squaredNorm();
  g.segment(n + 2 + m, m) = gl;
  return g;
}

NewtonStep newton_step(const NewtonState& state, const ConvexBody& body) {
  check_state(state, body);
  if (!(state.lambda_r > 0.0)) throw ContractError("newton_step: lambda_r must be positive");
  return compute_step(state, body, false);
}

CenterResult analytic_center(const ConvexBody& body, const Vector& x0,
                             const CenterOptions& options) {
  const Eigen::Index m = body.num_constraints();
  if (x0.size() != body.dim()) throw DimensionError("analytic_center: x0 has wrong length");

  NewtonState st;
  st.x = x0;
  const double sr0 = body.ball_slack(x0);
  st.s_r = sr0 > 0.0 ? sr0 : 1.0;
  st.s_a = body.linear_slacks(x0);
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(st.s_a(i) > 0.0)) st.s_a(i) = 1.0;
  st.lambda_r = options.negative_ball_multiplier_init ? -1.0 : 1.0;
  st.lambda_a = Vector::Zero(m);

  CenterResult result;
  result.state = st;
  result.x_star = st.x;
  result.grad_norm = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= options.max_iterations; ++k) {
    result.iterations = k;
    const double g0 = lagrangian_gradient(st, body).norm();
    result.grad_trace.push_back(g0);
    if (g0 < result.grad_norm) {
      result.grad_norm = g0;
      result.x_star = st.x;
      result.state = st;
    }

    const bool multipliers_ok = m == 0 || st.lambda_a.minCoeff() >= 0.0;
    if (g0 <= options.gradient_tol && multipliers_ok) {
      result.x_star = st.x;
      result.state = st;
      result.grad_norm = g0;
      result.status = CenterStatus::Success;
      return result;
    }

    NewtonStep d;
    try {
      d = compute_step(st, body, options.negative_ball_multiplier_init);
    } catch (const SingularityError& e) {
      log::debug(std::string("analytic_center: ") + e.what());
      break;
    }
    const double t = std::min(1.0, options.damping * step_cap(st, d));
    NewtonState next = advance(st, d, t);
    if (!slacks_positive(next)) {
      const double backoff = 0.999 * step_cap(st, d);
      next = advance(st, d, std::min(t, backoff));
    }
    if (!slacks_positive(next) || !next.x.allFinite()) break;
    st = std::move(next);
  }
  result.status = CenterStatus::Failure;
  return result;
}

namespace {

// Closed-form Lagrangian dual bound at multipliers u_r > 0, u >= 0.
double dual_bound(const ConvexBody& body, const Vector& c, double u_r, const Vector& u) {
  Vector g = c;
  double bu = 0.0;
  for (Eigen::Index i = 0; i < body.num_constraints(); ++i) {
    g += u(i) * body.normal(i);
    bu += u(i) * body.offset(i);
  }
  const double r2 = body.radius() * body.radius();
  return -g.squaredNorm() / (4.0 * u_r) - u_r * r2 - bu;
}

struct PathResult {
  double bound = -std::numeric_limits<double>::infinity();
  bool certified = false;
};

PathResult follow_central_path(const ConvexBody& body, const Vector& c, double tol, Vector x) {
  PathResult out;
  double t = 1.0;
  for (int outer = 0; outer < 40 && t < 1e20; ++outer, t *= 10.0) {
    try {
      for (int it = 0; it < 100; ++it) {
        const Vector g = t * c + barrier_gradient(body, x);
        const Vector dx = -solve_pd(barrier_hessian(body, x), g).solution;
        const double dec = std::sqrt(std::max(0.0, -g.dot(dx)));
        if (dec <= 1e-9) break;
        double alpha = dec > 0.25 ? 1.0 / (1.0 + dec) : 1.0;
        Vector trial = x + alpha * dx;
        int halvings = 0;
        while (!body.strictly_contains(trial) && halvings < 60) {
          alpha *= 0.5;
          trial = x + alpha * dx;
          ++halvings;
        }
        if (!body.strictly_contains(trial)) break;
        x = std::move(trial);
        if (dec <= 1e-6) break;
      }
    } catch (const SingularityError&) {
      return out;
    }
    const double u_r = 1.0 / (t * body.ball_slack(x));
    const Vector u = body.linear_slacks(x).cwiseInverse() / t;
    const double l = dual_bound(body, c, u_r, u);
    if (std::isfinite(l)) out.bound = std::max(out.bound, l);
    if (c.dot(x) - out.bound <= tol * (1.0 + std::abs(out.bound))) {
      out.certified = true;
      return out;
    }
  }
  return out;
}

std::optional<double> box_relaxation_bound(const ConvexBody& body, const Vector& c) {
  const Eigen::Index n = body.dim();
  const double r = body.radius();
  lp::Builder b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    b.set_bounds(j, -r, r);
    b.set_objective(j, c(j));
  }
  for (Eigen::Index i = 0; i < body.num_constraints(); ++i) {
    std::vector<std::pair<Eigen::Index, double>> terms;
    for (Eigen::Index j = 0; j < n; ++j)
      if (body.normal(i)(j) != 0.0) terms.emplace_back(j, body.normal(i)(j));
    b.add_le(terms, body.offset(i));
  }
  try {
    const lp::Result res = lp::solve(b.build());
    if (res.status != lp::Status::Optimal) return std::nullopt;
    // Simplex tolerances: widen by the primal feasibility slack.
    return res.objective - 1e-9 * c.lpNorm<1>() * (1.0 + r);
  } catch (const NumericFailure&) {
    return std::nullopt;
  }
}

}  // namespace

LowerBound lower_bound(const ConvexBody& body, const Vector& c, double tol,
                       const std::optional<Vector>& interior_point) {
  if (c.size() != body.dim()) throw DimensionError("lower_bound: objective has wrong length");
  LowerBound best{-body.radius() * c.norm(), BoundSource::Ball};
  if (body.num_constraints() == 0) return best;

  std::optional<Vector> start;
  if (interior_point && body.strictly_contains(*interior_point)) {
    start = interior_point;
  } else {
    const CenterResult ac = analytic_center(body, Vector::Zero(body.dim()));
    if (body.strictly_contains(ac.x_star)) start = ac.x_star;
  }

  if (start) {
    const PathResult path = follow_central_path(body, c, tol, *start);
    if (path.bound > best.value) best = LowerBound{path.bound, BoundSource::PathFollowing};
    if (path.certified) return best;
  }
  if (const auto box = box_relaxation_bound(body, c); box && *box > best.value) {
    best = LowerBound{*box, BoundSource::BoxRelaxation};
  }
  return best;
}

}  // namespace cpa

#include "cpa/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cpa::lp {

namespace {

enum class VarState { Basic, AtLower, AtUpper, Free };

class RevisedSimplex {
 public:
  RevisedSimplex(const Problem& p, const Options& opt) : p_(p), opt_(opt) {
    rows_ = p.a.rows();
    structural_ = p.a.cols();
    cols_ = structural_ + rows_;
    lower_.resize(cols_);
    upper_.resize(cols_);
    lower_.head(structural_) = p.lower;
    upper_.head(structural_) = p.upper;
    lower_.tail(rows_).setZero();
    upper_.tail(rows_).setConstant(kInf);
    x_ = Vector::Zero(cols_);
    state_.assign(static_cast<std::size_t>(cols_), VarState::AtLower);
    art_sign_ = Vector::Ones(rows_);
    bland_after_ = 5 * (rows_ + cols_);
    max_iterations_ = 50 * (rows_ + cols_) + 1000;
  }

  Result run() {
    Result result;
    for (Eigen::Index j = 0; j < structural_; ++j) {
      if (lower_(j) > upper_(j) + opt_.feasibility_tol) return result;
      if (std::isfinite(lower_(j))) {
        x_(j) = lower_(j);
        state_[j] = VarState::AtLower;
      } else if (std::isfinite(upper_(j))) {
        x_(j) = upper_(j);
        state_[j] = VarState::AtUpper;
      } else {
        x_(j) = 0.0;
        state_[j] = VarState::Free;
      }
    }
    const Vector residual = p_.b - p_.a * x_.head(structural_);
    basis_.resize(static_cast<std::size_t>(rows_));
    for (Eigen::Index i = 0; i < rows_; ++i) {
      art_sign_(i) = residual(i) < 0.0 ? -1.0 : 1.0;
      basis_[i] = structural_ + i;
      state_[structural_ + i] = VarState::Basic;
      x_(structural_ + i) = std::abs(residual(i));
    }
    refactor();

    // Phase 1: minimize the sum of artificials.
    Vector cost = Vector::Zero(cols_);
    cost.tail(rows_).setOnes();
    if (iterate(cost) == Status::Unbounded) {
      throw NumericFailure("simplex: phase 1 reported unbounded");
    }
    const double infeas = x_.tail(rows_).sum();
    if (infeas > opt_.feasibility_tol * (1.0 + p_.b.cwiseAbs().sum())) {
      result.status = Status::Infeasible;
      result.iterations = iterations_;
      return result;
    }

    // Phase 2: artificials pinned to zero.
    for (Eigen::Index i = 0; i < rows_; ++i) {
      upper_(structural_ + i) = 0.0;
      const auto k = static_cast<std::size_t>(structural_ + i);
      if (state_[k] != VarState::Basic) {
        state_[k] = VarState::AtLower;
        x_(structural_ + i) = 0.0;
      }
    }
    cost.setZero();
    cost.head(structural_) = p_.c;
    result.status = iterate(cost);
    result.iterations = iterations_;
    result.x = x_.head(structural_);
    result.objective = p_.c.dot(result.x);
    return result;
  }

 private:
  Vector column(Eigen::Index j) const {
    if (j < structural_) return p_.a.col(j);
    Vector e = Vector::Zero(rows_);
    e(j - structural_) = art_sign_(j - structural_);
    return e;
  }

  void refactor() {
    Matrix basis_matrix(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) basis_matrix.col(i) = column(basis_[i]);
    Eigen::PartialPivLU<Matrix> lu(basis_matrix);
    binv_ = lu.inverse();
    if (!binv_.allFinite()) throw NumericFailure("simplex: singular basis during refactorization");
    // Recompute basic values from the nonbasic ones.
    Vector rhs = p_.b;
    for (Eigen::Index j = 0; j < cols_; ++j) {
      if (state_[j] == VarState::Basic || x_(j) == 0.0) continue;
      rhs -= column(j) * x_(j);
    }
    const Vector xb = binv_ * rhs;
    for (Eigen::Index i = 0; i < rows_; ++i) x_(basis_[i]) = xb(i);
    since_refactor_ = 0;
  }

  Status iterate(const Vector& cost) {
    for (;;) {
      if (iterations_ > max_iterations_) {
        throw NumericFailure("simplex: iteration cap exceeded (" + std::to_string(iterations_) +
                             " pivots); possible cycling");
      }
      const bool bland = iterations_ >= bland_after_;

      Vector cb(rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) cb(i) = cost(basis_[i]);
      const Vector duals = binv_.transpose() * cb;

      Eigen::Index entering = -1;
      double best_score = 0.0;
      double entering_dir = 0.0;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        const VarState st = state_[j];
        if (st == VarState::Basic) continue;
        if (upper_(j) - lower_(j) <= 0.0) continue;  // fixed
        double reduced = cost(j);
        if (j < structural_) {
          reduced -= duals.dot(p_.a.col(j));
        } else {
          reduced -= duals(j - structural_) * art_sign_(j - structural_);
        }
        double dir = 0.0;
        if ((st == VarState::AtLower || st == VarState::Free) && reduced < -opt_.optimality_tol) {
          dir = 1.0;
        } else if ((st == VarState::AtUpper || st == VarState::Free) &&
                   reduced > opt_.optimality_tol) {
          dir = -1.0;
        }
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          entering_dir = dir;
          break;
        }
        if (std::abs(reduced) > best_score) {
          best_score = std::abs(reduced);
          entering = j;
          entering_dir = dir;
        }
      }
      if (entering < 0) return Status::Optimal;

      const Vector alpha = binv_ * column(entering);

      // Ratio test. theta is the step of the entering variable along dir.
      const double flip = state_[entering] == VarState::Free ? kInf : upper_(entering) - lower_(entering);
      auto row_limit = [&](Eigen::Index i, double relax) {
        const double rate = -entering_dir * alpha(i);
        const Eigen::Index k = basis_[i];
        if (rate < 0.0 && std::isfinite(lower_(k))) return std::max(0.0, (x_(k) - lower_(k) + relax) / -rate);
        if (rate > 0.0 && std::isfinite(upper_(k))) return std::max(0.0, (upper_(k) - x_(k) + relax) / rate);
        return kInf;
      };
      double theta = flip;
      Eigen::Index leave_row = -1;
      if (bland) {
        // Exact minimum ratio, lowest basic index on ties.
        for (Eigen::Index i = 0; i < rows_; ++i) {
          if (std::abs(alpha(i)) <= opt_.pivot_tol) continue;
          const double limit = row_limit(i, 0.0);
          if (!std::isfinite(limit)) continue;
          const double tie = 1e-12 * (1.0 + limit);
          if (limit < theta - tie ||
              (limit <= theta + tie && (leave_row < 0 || basis_[i] < basis_[leave_row]))) {
            theta = std::min(theta, limit);
            leave_row = i;
          }
        }
      } else {
        // Harris: bound the step with relaxed limits, then take the largest
        // pivot among the rows that block within that bound.
        double theta_max = flip;
        for (Eigen::Index i = 0; i < rows_; ++i) {
          if (std::abs(alpha(i)) <= opt_.pivot_tol) continue;
          theta_max = std::min(theta_max, row_limit(i, opt_.feasibility_tol));
        }
        if (flip > theta_max) {
          double best_pivot = 0.0;
          for (Eigen::Index i = 0; i < rows_; ++i) {
            if (std::abs(alpha(i)) <= opt_.pivot_tol) continue;
            const double limit = row_limit(i, 0.0);
            if (limit <= theta_max && std::abs(alpha(i)) > best_pivot) {
              best_pivot = std::abs(alpha(i));
              leave_row = i;
              theta = limit;
            }
          }
        }
      }
      const double leave_pivot = leave_row >= 0 ? alpha(leave_row) : 0.0;
      if (!std::isfinite(theta)) return Status::Unbounded;

      ++iterations_;
      x_(entering) += entering_dir * theta;
      for (Eigen::Index i = 0; i < rows_; ++i) x_(basis_[i]) -= entering_dir * theta * alpha(i);

      if (leave_row < 0) {
        // Entering variable moved to its opposite bound.
        if (entering_dir > 0.0) {
          state_[entering] = VarState::AtUpper;
          x_(entering) = upper_(entering);
        } else {
          state_[entering] = VarState::AtLower;
          x_(entering) = lower_(entering);
        }
        continue;
      }

      const Eigen::Index leaving = basis_[leave_row];
      const double rate = -entering_dir * leave_pivot;
      if (rate < 0.0) {
        state_[leaving] = VarState::AtLower;
        x_(leaving) = lower_(leaving);
      } else {
        state_[leaving] = VarState::AtUpper;
        x_(leaving) = upper_(leaving);
      }
      basis_[leave_row] = entering;
      state_[entering] = VarState::Basic;

      // Product-form update of the explicit inverse.
      const Eigen::RowVectorXd pivot_row = binv_.row(leave_row) / leave_pivot;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (i == leave_row) continue;
        if (alpha(i) != 0.0) binv_.row(i) -= alpha(i) * pivot_row;
      }
      binv_.row(leave_row) = pivot_row;

      if (++since_refactor_ >= opt_.refactor_every) refactor();
    }
  }

  const Problem& p_;
  const Options& opt_;
  Eigen::Index rows_ = 0, structural_ = 0, cols_ = 0;
  Vector lower_, upper_, x_, art_sign_;
  std::vector<VarState> state_;
  std::vector<Eigen::Index> basis_;
  Matrix binv_;
  int iterations_ = 0;
  int since_refactor_ = 0;
  int bland_after_ = 0;
  int max_iterations_ = 0;
};

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  const Eigen::Index n = problem.a.cols();
  if (problem.b.size() != problem.a.rows() || problem.c.size() != n ||
      problem.lower.size() != n || problem.upper.size() != n) {
    throw DimensionError("simplex: inconsistent problem dimensions");
  }
  RevisedSimplex s(problem, options);
  return s.run();
}

Builder::Builder(Eigen::Index num_vars)
    : c_(Vector::Zero(num_vars)),
      lower_(Vector::Zero(num_vars)),
      upper_(Vector::Constant(num_vars, kInf)) {}

void Builder::set_bounds(Eigen::Index j, double lo, double hi) {
  lower_(j) = lo;
  upper_(j) = hi;
}

void Builder::add_eq(const std::vector<std::pair<Eigen::Index, double>>& terms, double rhs) {
  rows_.push_back({terms, rhs, 0});
}

void Builder::add_le(const std::vector<std::pair<Eigen::Index, double>>& terms, double rhs) {
  rows_.push_back({terms, rhs, 1});
}

void Builder::add_ge(const std::vector<std::pair<Eigen::Index, double>>& terms, double rhs) {
  rows_.push_back({terms, rhs, -1});
}

Problem Builder::build() const {
  const Eigen::Index n = c_.size();
  Eigen::Index slacks = 0;
  for (const auto& r : rows_) slacks += (r.sense != 0);
  const auto m = static_cast<Eigen::Index>(rows_.size());
  Problem p;
  p.a = Matrix::Zero(m, n + slacks);
  p.b.resize(m);
  p.c = Vector::Zero(n + slacks);
  p.c.head(n) = c_;
  p.lower = Vector::Zero(n + slacks);
  p.upper = Vector::Constant(n + slacks, kInf);
  p.lower.head(n) = lower_;
  p.upper.head(n) = upper_;
  Eigen::Index s = n;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Row& r = rows_[static_cast<std::size_t>(i)];
    for (const auto& [j, v] : r.terms) p.a(i, j) += v;
    p.b(i) = r.rhs;
    if (r.sense != 0) p.a(i, s++) = static_cast<double>(r.sense);
  }
  return p;
}

}  // namespace cpa::lp

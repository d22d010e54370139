#pragma once

#include <limits>
#include <vector>

#include "cpa/linalg.hpp"

namespace cpa::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c^T x  subject to  A x = b,  lower <= x <= upper.
/// Bounds may be infinite; a variable with both bounds infinite is free.
struct Problem {
  Matrix a;
  Vector b;
  Vector c;
  Vector lower;
  Vector upper;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Vector x;
  double objective = 0.0;
  int iterations = 0;
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Number of pivots between basis refactorizations.
  int refactor_every = 64;
};

/// Two-phase bounded-variable revised simplex with a dense explicit basis
/// inverse. Dantzig pricing switches to Bland's rule after
/// 5 * (rows + cols) pivots; throws NumericFailure once a hard iteration cap
/// is exceeded. Deterministic for identical input.
Result solve(const Problem& problem, const Options& options = {});

/// Convenience builder for problems with mixed equality and inequality rows.
/// Inequality rows receive a slack column appended after the structural
/// variables; Result::x of the built problem includes those slacks.
class Builder {
 public:
  explicit Builder(Eigen::Index num_vars);

  void set_objective(Eigen::Index j, double coef) { c_(j) = coef; }
  void set_bounds(Eigen::Index j, double lo, double hi);

  /// sum_k coefs[k] * x[cols[k]]  (=, <=, >=)  rhs
  void add_eq(const std::vector<std::pair<Eigen::Index, double>>& terms, double rhs);
  void add_le(const std::vector<std::pair<Eigen::Index, double>>& terms, double rhs);
  void add_ge(const std::vector<std::pair<Eigen::Index, double>>& terms, double rhs);

  Problem build() const;

  Eigen::Index num_vars() const { return c_.size(); }

 private:
  struct Row {
    std::vector<std::pair<Eigen::Index, double>> terms;
    double rhs;
    int sense;  // 0: =, +1: <=, -1: >=
  };

  Vector c_, lower_, upper_;
  std::vector<Row> rows_;
};

}  // namespace cpa::lp

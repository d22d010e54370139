#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "cpa/linalg.hpp"

namespace cpa {

/// Binary pattern z in {0,1}^d.
using Pattern = std::vector<std::uint8_t>;

/// The mixed-integer program
///
///   min  -mu
///   s.t. X y + mu e - nu = 0,   e^T y = 1,
///        0 <= y_i <= z_i,       0 <= nu_i <= bigM (1 - z_i),   z binary,
///
/// whose optimal value equals min { y^T X y : y in simplex }, optionally
/// restricted by fixed binaries and by no-good cuts excluding whole patterns.
struct CopositivityModel {
  SymMatrix x;
  double big_m = 0.0;
  /// -1: free, 0 or 1: fixed value of z_i. Empty means all free.
  std::vector<int> fixed_z;
  /// Each pattern p adds  sum_{p_i=0} z_i + sum_{p_i=1} (1 - z_i) >= 1.
  std::vector<Pattern> excluded_patterns;

  /// Model for X with bigM = 2 d max|X_kl| and no restrictions.
  static CopositivityModel for_matrix(const SymMatrix& x);

  Eigen::Index dim() const { return x.dim(); }
};

struct MilpSolution {
  Vector y;
  Vector z;
  double mu = 0.0;
  Vector nu;
  /// -mu
  double objective = 0.0;
};

struct BranchAndBoundStats {
  int nodes = 0;         ///< LP relaxations solved
  int branchings = 0;    ///< nodes split on a fractional z_i
  int lp_iterations = 0;
};

/// Best-first branch-and-bound over z with LP relaxations 0 <= z <= 1.
/// Branches on the most fractional z_i (lowest index on ties); node
/// selection is best bound, then insertion order. Returns nullopt when the
/// restricted model is infeasible; throws NumericFailure if an LP breaks down.
std::optional<MilpSolution> branch_and_bound(const CopositivityModel& model,
                                             BranchAndBoundStats* stats = nullptr);

/// Global optimum of the model; throws InfeasibleModel if no binary pattern
/// is admissible.
MilpSolution min_quadratic_over_simplex_milp(const CopositivityModel& model);

using MilpSolver = std::function<std::optional<MilpSolution>(const CopositivityModel&)>;

/// Complementarity threshold 1e-8 (1 + max|X_kl|) that triggers the
/// rounding repair.
double complementarity_tol(const SymMatrix& x);

/// Round-half-up of every coordinate.
Pattern round_pattern(const Vector& z);

/// Solves the model and, when the returned point violates complementarity
/// (y^T nu > tol) and improves on `upper`, repairs it: the model with z fixed
/// to Round(z) is solved directly, the model with Round(z) excluded is solved
/// recursively (bounded by the first value when that was feasible), and the
/// better of the two is returned. `solver` defaults to branch_and_bound.
std::optional<MilpSolution> solve_model(const CopositivityModel& model,
                                        double upper = std::numeric_limits<double>::infinity(),
                                        const MilpSolver& solver = {});

struct Cut {
  /// Point of the standard simplex with y^T X y = value < 0.
  Vector y;
  double value = 0.0;
};

struct OracleVerdict {
  bool copositive = true;
  std::optional<Cut> cut;
};

/// Threshold below which y^T X y counts as a violation:
/// y^T X y < -1e-12 (1 + max|X_kl|).
double copositivity_tol(const SymMatrix& x);

/// Decides copositivity of X. When X is not copositive the verdict carries a
/// simplex vector y with y^T X y < 0; the halfspace {X' : y^T X' y >= 0}
/// contains the copositive cone but not X.
OracleVerdict test_copositive(const SymMatrix& x);

struct SimplexMinimum {
  double value = 0.0;
  Vector y;
};

/// Exact minimum of y^T X y over the standard simplex by enumerating every
/// support S and solving its KKT system. Supports whose reduced KKT system is
/// singular only contribute their vertices (which are enumerated anyway).
/// Throws DimensionError for d > 20.
SimplexMinimum brute_force_simplex_min(const SymMatrix& x);

}  // namespace cpa

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cpa/copositivity.hpp"
#include "cpa/cutting_plane.hpp"

namespace cpa {

enum class Verdict { CompletelyPositive, NotCompletelyPositive, Inconclusive };

std::string to_string(Verdict v);

enum class SolverKind { Accp, Ellipsoid };

std::string to_string(SolverKind s);

struct CpOptions {
  SolverKind solver = SolverKind::Accp;
  double epsilon = 1e-6;
  /// <C, X> below -cp_threshold at a copositive X rejects C.
  double cp_threshold = 1e-2;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  /// Copositive X with <C, X> < 0; present only for NotCompletelyPositive.
  std::optional<SymMatrix> cut_matrix;
  /// <C, X> at the best copositive X found (0 if none was found).
  double objective = 0.0;
  /// Best X found, if any.
  std::optional<SymMatrix> best_matrix;
  double lower_bound = 0.0;
  double gap = 0.0;
  /// Completely positive verdict with objective in (-cp_threshold, -epsilon).
  bool near_boundary = false;
  SolverKind solver = SolverKind::Accp;
  SolveTrace trace;
  /// Explanation for Inconclusive verdicts.
  std::string message;
};

/// Minimizes <C, X> over copositive X with ||vec(X)|| <= 1 and classifies C.
/// Every emitted cut is re-checked with test_copositive before it is
/// returned. Solver failures yield an Inconclusive certificate.
/// Throws ContractError for non-symmetric input.
Certificate completely_positive_cut(const SymMatrix& c, const CpOptions& options = {});
Certificate completely_positive_cut(const Matrix& c, const CpOptions& options = {});

/// Separation oracle in vec-coordinates: accepts x when mat(x) is
/// copositive, otherwise returns {x : -mat_adjoint(y y^T)^T x <= 0}.
Oracle copositive_oracle();

/// B B^T / ||vec(B B^T)|| with B a d x k matrix of absolute standard normal
/// draws from a seeded mt19937_64.
SymMatrix make_random_cp(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// <C, X> < 0 and X copositive.
bool verify_cut(const SymMatrix& c, const SymMatrix& x);

}  // namespace cpa

#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "cpa/error.hpp"

namespace cpa {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Both triangles are stored and always mirror each
/// other; every constructor enforces this.
class SymMatrix {
 public:
  /// Zero matrix of order `dim` (dim >= 1).
  explicit SymMatrix(Eigen::Index dim);

  /// Wraps a dense square matrix. Entries must satisfy
  /// |M_ij - M_ji| <= rel_tol * max|M_kl|; the stored matrix takes the upper
  /// triangle and mirrors it.
  static SymMatrix from_dense(const Matrix& m, double rel_tol = 0.0);

  static SymMatrix identity(Eigen::Index dim);

  /// Diagonal matrix with the given diagonal.
  static SymMatrix diagonal(const Vector& diag);

  /// y y^T.
  static SymMatrix outer(const Vector& y);

  Eigen::Index dim() const { return data_.rows(); }

  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  /// Writes both (i, j) and (j, i).
  void set(Eigen::Index i, Eigen::Index j, double value);

  const Matrix& dense() const { return data_; }

  /// max_{k,l} |X_kl|
  double max_abs() const;

  /// y^T X y
  double quadratic_form(const Vector& y) const;

  SymMatrix scaled(double alpha) const;

  bool operator==(const SymMatrix& other) const { return data_ == other.data_; }

 private:
  explicit SymMatrix(Matrix data) : data_(std::move(data)) {}

  Matrix data_;
};

/// Trace inner product <A, B>.
double inner(const SymMatrix& a, const SymMatrix& b);

/// Length of vec(X) for a d x d matrix.
constexpr Eigen::Index sym_vec_size(Eigen::Index d) { return d * (d + 1) / 2; }

/// Inverse of sym_vec_size; throws DimensionError if n is not triangular.
Eigen::Index sym_dim_from_size(Eigen::Index n);

/// Upper triangle listed column by column: X11, X12, X22, X13, X23, X33, ...
Vector vec(const SymMatrix& x);

/// Inverse of vec.
SymMatrix mat(const Vector& x);

/// Adjoint of mat: dot(mat_adjoint(C), x) == <C, mat(x)>. Diagonal entries
/// are copied and off-diagonal entries doubled.
Vector mat_adjoint(const SymMatrix& c);

struct PdSolve {
  Vector solution;
  /// Diagonal shift that had to be added for the factorization to succeed.
  double shift = 0.0;
};

/// Solves M v = rhs for symmetric positive definite M by Cholesky
/// factorization. When the factorization breaks down the diagonal is shifted
/// by 1e-12 * scale, growing tenfold per retry up to 1e-6 * scale, where
/// scale = max(1, max|M_ii|).
///
/// Throws ContractError for non-symmetric or non-square M and
/// SingularityError when even the largest shift fails.
PdSolve solve_pd(const Matrix& m, const Vector& rhs);

}  // namespace cpa

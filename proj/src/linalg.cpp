#include "cpa/linalg.hpp"

#include <cmath>
#include <string>

namespace cpa {

SymMatrix::SymMatrix(Eigen::Index dim) {
  if (dim < 1) throw DimensionError("SymMatrix: dimension must be at least 1");
  data_ = Matrix::Zero(dim, dim);
}

SymMatrix SymMatrix::from_dense(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("SymMatrix: expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const Eigen::Index d = m.rows();
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) {
        throw ContractError("SymMatrix: entry (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ") is not symmetric");
      }
      out(i, j) = m(i, j);
      out(j, i) = m(i, j);
    }
  }
  return SymMatrix(std::move(out));
}

SymMatrix SymMatrix::identity(Eigen::Index dim) {
  SymMatrix s(dim);
  s.data_.setIdentity();
  return s;
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
  SymMatrix s(diag.size());
  s.data_.diagonal() = diag;
  return s;
}

SymMatrix SymMatrix::outer(const Vector& y) {
  if (y.size() < 1) throw DimensionError("SymMatrix::outer: empty vector");
  return SymMatrix(Matrix(y * y.transpose()));
}

void SymMatrix::set(Eigen::Index i, Eigen::Index j, double value) {
  data_(i, j) = value;
  data_(j, i) = value;
}

double SymMatrix::max_abs() const { return data_.cwiseAbs().maxCoeff(); }

double SymMatrix::quadratic_form(const Vector& y) const { return y.dot(data_ * y); }

SymMatrix SymMatrix::scaled(double alpha) const { return SymMatrix(Matrix(alpha * data_)); }

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

Eigen::Index sym_dim_from_size(Eigen::Index n) {
  const auto d = static_cast<Eigen::Index>(std::llround((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
  if (n < 1 || sym_vec_size(d) != n) {
    throw DimensionError("mat: length " + std::to_string(n) + " is not a triangular number");
  }
  return d;
}

Vector vec(const SymMatrix& x) {
  const Eigen::Index d = x.dim();
  Vector out(sym_vec_size(d));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) out(k++) = x(i, j);
  return out;
}

SymMatrix mat(const Vector& x) {
  const Eigen::Index d = sym_dim_from_size(x.size());
  SymMatrix out(d);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) out.set(i, j, x(k++));
  return out;
}

Vector mat_adjoint(const SymMatrix& c) {
  const Eigen::Index d = c.dim();
  Vector out(sym_vec_size(d));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) out(k++) = (i == j) ? c(i, j) : 2.0 * c(i, j);
  return out;
}

PdSolve solve_pd(const Matrix& m, const Vector& rhs) {
  if (m.rows() != m.cols()) throw ContractError("solve_pd: matrix is not square");
  if (m.rows() != rhs.size()) throw DimensionError("solve_pd: right-hand side size mismatch");
  const double mag = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + mag)) {
    throw ContractError("solve_pd: matrix is not symmetric");
  }
  if (m.rows() == 0) return {Vector(0), 0.0};

  const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  double shift = 0.0;
  double next_shift = 1e-12;
  for (;;) {
    Matrix shifted = m;
    shifted.diagonal().array() += shift * scale;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Vector v = llt.solve(rhs);
      if (v.allFinite()) return {std::move(v), shift * scale};
    }
    if (next_shift > 1e-6 * (1.0 + 1e-9)) break;
    shift = next_shift;
    next_shift *= 10.0;
  }
  throw SingularityError("solve_pd: factorization failed after maximum diagonal shift");
}

}  // namespace cpa

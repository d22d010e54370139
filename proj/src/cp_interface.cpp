#include "cpa/cp_interface.hpp"

#include <cmath>
#include <random>

#include "cpa/log.hpp"

namespace cpa {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CompletelyPositive:
      return "completely_positive";
    case Verdict::NotCompletelyPositive:
      return "not_completely_positive";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(SolverKind s) { return s == SolverKind::Accp ? "accp" : "ellipsoid"; }

Oracle copositive_oracle() {
  return [](const Vector& x) {
    const OracleVerdict v = test_copositive(mat(x));
    if (v.copositive) return OracleResponse::accept();
    return OracleResponse::halfspace(-mat_adjoint(SymMatrix::outer(v.cut->y)), 0.0);
  };
}

Certificate completely_positive_cut(const Matrix& c, const CpOptions& options) {
  return completely_positive_cut(SymMatrix::from_dense(c), options);
}

Certificate completely_positive_cut(const SymMatrix& c, const CpOptions& options) {
  Certificate cert;
  cert.solver = options.solver;
  const Vector objective = mat_adjoint(c);
  if (!(objective.norm() > 0.0)) {
    // C = 0 is completely positive and every X is optimal.
    cert.verdict = Verdict::CompletelyPositive;
    return cert;
  }

  std::optional<Vector> best;
  try {
    SolveResult res;
    if (options.solver == SolverKind::Accp) {
      AccpConfig cfg;
      cfg.epsilon = options.epsilon;
      res = accp_solve(objective, copositive_oracle(), 1.0, cfg);
    } else {
      EllipsoidConfig cfg;
      cfg.epsilon = options.epsilon;
      res = ellipsoid_solve(objective, copositive_oracle(), 1.0, cfg);
    }
    best = res.x_best;
    cert.lower_bound = res.lower_bound;
    cert.gap = res.gap;
    cert.trace = std::move(res.trace);
  } catch (const SolveError& e) {
    cert.trace = e.trace();
    cert.verdict = Verdict::Inconclusive;
    cert.message = e.what();
    if (e.best()) {
      cert.best_matrix = mat(*e.best());
      cert.objective = inner(c, *cert.best_matrix);
    }
    log::info(std::string("completely_positive_cut: ") + e.what());
    return cert;
  } catch (const Error& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.message = e.what();
    return cert;
  }

  const SymMatrix x = mat(*best);
  cert.best_matrix = x;
  cert.objective = inner(c, x);
  if (cert.objective < -options.cp_threshold) {
    if (verify_cut(c, x)) {
      cert.verdict = Verdict::NotCompletelyPositive;
      cert.cut_matrix = x;
    } else {
      cert.verdict = Verdict::Inconclusive;
      cert.message = "best matrix failed copositivity re-check";
    }
  } else {
    cert.verdict = Verdict::CompletelyPositive;
    const double scale = 1.0 + std::abs(cert.lower_bound);
    cert.near_boundary = cert.objective < -options.epsilon * scale;
  }
  return cert;
}

SymMatrix make_random_cp(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
  if (d < 1 || k < 1) throw ContractError("make_random_cp: d and k must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix b(d, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < d; ++i) b(i, j) = std::abs(normal(rng));
  Matrix bbt = b * b.transpose();
  bbt = 0.5 * (bbt + bbt.transpose()).eval();
  const SymMatrix s = SymMatrix::from_dense(bbt);
  return s.scaled(1.0 / vec(s).norm());
}

bool verify_cut(const SymMatrix& c, const SymMatrix& x) {
  if (c.dim() != x.dim()) throw DimensionError("verify_cut: dimension mismatch");
  if (!(inner(c, x) < 0.0)) return false;
  return test_copositive(x).copositive;
}

}  // namespace cpa

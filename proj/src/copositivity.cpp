#include "cpa/copositivity.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "cpa/log.hpp"
#include "cpa/simplex_lp.hpp"

namespace cpa {

namespace {

constexpr double kIntegralityTol = 1e-7;

// Column layout of the LP relaxation.
struct Layout {
  Eigen::Index d;
  Eigen::Index y(Eigen::Index i) const { return i; }
  Eigen::Index z(Eigen::Index i) const { return d + i; }
  Eigen::Index mu() const { return 2 * d; }
  Eigen::Index nu(Eigen::Index i) const { return 2 * d + 1 + i; }
  Eigen::Index count() const { return 3 * d + 1; }
};

std::optional<MilpSolution> solve_relaxation(const CopositivityModel& model,
                                             const std::vector<int>& fixings,
                                             BranchAndBoundStats& stats) {
  const Eigen::Index d = model.dim();
  const Layout at{d};
  const Matrix& x = model.x.dense();
  const double big_m = model.big_m;

  lp::Builder b(at.count());
  b.set_objective(at.mu(), -1.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    b.set_bounds(at.y(i), 0.0, 1.0);
    const int f = fixings[static_cast<std::size_t>(i)];
    if (f < 0) {
      b.set_bounds(at.z(i), 0.0, 1.0);
    } else {
      b.set_bounds(at.z(i), f, f);
    }
    b.set_bounds(at.nu(i), 0.0, big_m);
  }
  b.set_bounds(at.mu(), -lp::kInf, lp::kInf);

  for (Eigen::Index i = 0; i < d; ++i) {
    std::vector<std::pair<Eigen::Index, double>> terms;
    terms.reserve(static_cast<std::size_t>(d + 2));
    for (Eigen::Index j = 0; j < d; ++j) {
      if (x(i, j) != 0.0) terms.emplace_back(at.y(j), x(i, j));
    }
    terms.emplace_back(at.mu(), 1.0);
    terms.emplace_back(at.nu(i), -1.0);
    b.add_eq(terms, 0.0);
  }
  {
    std::vector<std::pair<Eigen::Index, double>> terms;
    for (Eigen::Index i = 0; i < d; ++i) terms.emplace_back(at.y(i), 1.0);
    b.add_eq(terms, 1.0);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    b.add_le({{at.y(i), 1.0}, {at.z(i), -1.0}}, 0.0);
    b.add_le({{at.nu(i), 1.0}, {at.z(i), big_m}}, big_m);
  }
  for (const Pattern& p : model.excluded_patterns) {
    std::vector<std::pair<Eigen::Index, double>> terms;
    double ones = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (p[static_cast<std::size_t>(i)] != 0) {
        terms.emplace_back(at.z(i), -1.0);
        ones += 1.0;
      } else {
        terms.emplace_back(at.z(i), 1.0);
      }
    }
    b.add_ge(terms, 1.0 - ones);
  }

  const lp::Result r = lp::solve(b.build());
  ++stats.nodes;
  stats.lp_iterations += r.iterations;
  if (r.status == lp::Status::Infeasible) return std::nullopt;
  if (r.status == lp::Status::Unbounded) {
    throw NumericFailure("branch_and_bound: LP relaxation unbounded (mu should be bounded)");
  }

  MilpSolution s;
  s.y = r.x.segment(at.y(0), d);
  s.z = r.x.segment(at.z(0), d);
  s.mu = r.x(at.mu());
  s.nu = r.x.segment(at.nu(0), d);
  s.objective = -s.mu;
  return s;
}

// Index of the most fractional z, or -1 if integral.
Eigen::Index branching_index(const Vector& z) {
  Eigen::Index best = -1;
  double best_frac = kIntegralityTol;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double frac = std::min(z(i), 1.0 - z(i));
    if (frac > best_frac) {
      best_frac = frac;
      best = i;
    }
  }
  return best;
}

struct Node {
  double bound;
  long seq;
  std::vector<int> fixings;
  MilpSolution relaxation;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

std::vector<int> initial_fixings(const CopositivityModel& model) {
  const auto d = static_cast<std::size_t>(model.dim());
  if (model.fixed_z.empty()) return std::vector<int>(d, -1);
  if (model.fixed_z.size() != d) throw DimensionError("CopositivityModel: fixed_z has wrong length");
  for (int f : model.fixed_z) {
    if (f < -1 || f > 1) throw ContractError("CopositivityModel: fixed_z entries must be -1, 0 or 1");
  }
  return model.fixed_z;
}

void validate(const CopositivityModel& model) {
  if (model.big_m < 0.0) throw ContractError("CopositivityModel: bigM must be nonnegative");
  for (const Pattern& p : model.excluded_patterns) {
    if (static_cast<Eigen::Index>(p.size()) != model.dim()) {
      throw DimensionError("CopositivityModel: excluded pattern has wrong length");
    }
    for (auto v : p) {
      if (v > 1) throw ContractError("CopositivityModel: pattern entries must be 0 or 1");
    }
  }
}

}  // namespace

CopositivityModel CopositivityModel::for_matrix(const SymMatrix& x) {
  return CopositivityModel{x, 2.0 * static_cast<double>(x.dim()) * x.max_abs(), {}, {}};
}

std::optional<MilpSolution> branch_and_bound(const CopositivityModel& model,
                                             BranchAndBoundStats* stats_out) {
  validate(model);
  BranchAndBoundStats stats;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;

  std::optional<MilpSolution> incumbent;
  auto prunable = [&](double bound) {
    if (!incumbent) return false;
    return bound >= incumbent->objective - 1e-9 * (1.0 + std::abs(incumbent->objective));
  };
  auto consider = [&](std::vector<int> fixings, MilpSolution relax) {
    if (prunable(relax.objective)) return;
    if (branching_index(relax.z) < 0) {
      for (Eigen::Index i = 0; i < relax.z.size(); ++i) relax.z(i) = std::round(relax.z(i));
      incumbent = std::move(relax);
      return;
    }
    const double bound = relax.objective;
    open.push(Node{bound, seq++, std::move(fixings), std::move(relax)});
  };

  std::vector<int> root = initial_fixings(model);
  if (auto relax = solve_relaxation(model, root, stats)) consider(root, std::move(*relax));

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (prunable(node.bound)) break;  // best-first: every remaining node is worse
    const Eigen::Index i = branching_index(node.relaxation.z);
    ++stats.branchings;
    for (int value : {0, 1}) {
      std::vector<int> child = node.fixings;
      child[static_cast<std::size_t>(i)] = value;
      if (auto relax = solve_relaxation(model, child, stats)) consider(child, std::move(*relax));
    }
  }

  log::debug("branch_and_bound: d=" + std::to_string(model.dim()) +
             " nodes=" + std::to_string(stats.nodes) +
             " branchings=" + std::to_string(stats.branchings));
  if (stats_out != nullptr) *stats_out = stats;
  return incumbent;
}

MilpSolution min_quadratic_over_simplex_milp(const CopositivityModel& model) {
  auto s = branch_and_bound(model);
  if (!s) throw InfeasibleModel("copositivity model has no admissible binary pattern");
  return *s;
}

double complementarity_tol(const SymMatrix& x) { return 1e-8 * (1.0 + x.max_abs()); }

Pattern round_pattern(const Vector& z) {
  Pattern p(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) p[static_cast<std::size_t>(i)] = z(i) >= 0.5 ? 1 : 0;
  return p;
}

std::optional<MilpSolution> solve_model(const CopositivityModel& model, double upper,
                                        const MilpSolver& solver) {
  const MilpSolver& solve =
      solver ? solver : MilpSolver([](const CopositivityModel& m) { return branch_and_bound(m); });

  std::optional<MilpSolution> hat = solve(model);
  if (!hat) return std::nullopt;
  if (!(hat->y.dot(hat->nu) > complementarity_tol(model.x) && hat->objective < upper)) return hat;

  const Pattern rounded = round_pattern(hat->z);
  log::debug("solve_model: complementarity violated (y'nu = " + std::to_string(hat->y.dot(hat->nu)) +
             "), repairing");

  // Model with z = Round(z_hat). Conflicting earlier fixings make it infeasible.
  std::optional<MilpSolution> fixed;
  {
    CopositivityModel bar = model;
    const std::vector<int> prior = initial_fixings(model);
    bar.fixed_z.assign(rounded.begin(), rounded.end());
    bool conflict = false;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (prior[i] >= 0 && prior[i] != bar.fixed_z[i]) conflict = true;
    }
    if (!conflict) fixed = solve(bar);
  }

  CopositivityModel prime = model;
  prime.excluded_patterns.push_back(rounded);

  if (fixed) {
    std::optional<MilpSolution> other = solve_model(prime, fixed->objective, solve);
    if (other && other->objective < fixed->objective) return other;
    return fixed;
  }
  return solve_model(prime, std::numeric_limits<double>::infinity(), solve);
}

double copositivity_tol(const SymMatrix& x) { return 1e-12 * (1.0 + x.max_abs()); }

OracleVerdict test_copositive(const SymMatrix& x) {
  if (x.max_abs() == 0.0) return OracleVerdict{true, std::nullopt};

  std::optional<MilpSolution> s = solve_model(CopositivityModel::for_matrix(x));
  if (!s) throw NumericFailure("test_copositive: unrestricted copositivity model reported infeasible");

  Vector y = s->y.cwiseMax(0.0);
  const double total = y.sum();
  if (!(total > 0.0)) throw NumericFailure("test_copositive: solver returned y = 0");
  y /= total;
  const double value = x.quadratic_form(y);
  if (value >= -copositivity_tol(x)) return OracleVerdict{true, std::nullopt};
  return OracleVerdict{false, Cut{std::move(y), value}};
}

SimplexMinimum brute_force_simplex_min(const SymMatrix& x) {
  const Eigen::Index d = x.dim();
  if (d > 20) throw DimensionError("brute_force_simplex_min: d > 20 is not supported");
  const Matrix& m = x.dense();

  SimplexMinimum best{std::numeric_limits<double>::infinity(), Vector::Zero(d)};
  std::vector<Eigen::Index> support;
  const unsigned long subsets = 1UL << d;
  for (unsigned long mask = 1; mask < subsets; ++mask) {
    support.clear();
    for (Eigen::Index i = 0; i < d; ++i)
      if (mask & (1UL << i)) support.push_back(i);
    const auto k = static_cast<Eigen::Index>(support.size());

    Vector y = Vector::Zero(d);
    if (k == 1) {
      y(support[0]) = 1.0;
    } else {
      // Stationarity on the face: 2 X_SS y_S - lambda e = 0, e^T y_S = 1.
      Matrix kkt = Matrix::Zero(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = 2.0 * m(support[a], support[b]);
        kkt(a, k) = -1.0;
        kkt(k, a) = 1.0;
      }
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      Eigen::FullPivLU<Matrix> lu(kkt);
      if (!lu.isInvertible()) continue;
      const Vector sol = lu.solve(rhs);
      bool nonneg = true;
      for (Eigen::Index a = 0; a < k; ++a) {
        if (!(sol(a) >= -1e-12)) nonneg = false;
      }
      if (!nonneg) continue;
      for (Eigen::Index a = 0; a < k; ++a) y(support[a]) = std::max(0.0, sol(a));
      y /= y.sum();
    }
    const double value = x.quadratic_form(y);
    if (value < best.value) best = SimplexMinimum{value, std::move(y)};
  }
  return best;
}

}  // namespace cpa

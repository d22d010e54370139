#include <doctest.h>

#include "cpa/copositivity.hpp"
#include "cpa/error.hpp"
#include "test_support.hpp"

using namespace cpa;

namespace {

SymMatrix sym2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return SymMatrix::from_dense(m);
}

// Dense grid over the 2-simplex: y = (t, 1 - t).
double grid_min_2d(const SymMatrix& x) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100000; ++i) {
    const double t = i / 100000.0;
    Vector y{{t, 1.0 - t}};
    best = std::min(best, x.quadratic_form(y));
  }
  return best;
}

void check_solution_invariants(const CopositivityModel& model, const MilpSolution& s) {
  const Eigen::Index d = model.dim();
  CHECK(std::abs(s.y.sum() - 1.0) <= 1e-9);
  CHECK(s.objective == doctest::Approx(-s.mu).epsilon(1e-12));
  for (Eigen::Index i = 0; i < d; ++i) {
    CHECK(s.y(i) >= -1e-9);
    CHECK(s.y(i) <= s.z(i) + 1e-9);
    CHECK(s.nu(i) >= -1e-9);
    CHECK(s.nu(i) <= model.big_m * (1.0 - s.z(i)) + 1e-7);
    CHECK((s.z(i) == 0.0 || s.z(i) == 1.0));
  }
  const Vector r = model.x.dense() * s.y + Vector::Constant(d, s.mu) - s.nu;
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + model.big_m));
}

}  // namespace

TEST_CASE("MILP minimum on small examples") {
  SUBCASE("identity") {
    const auto model = CopositivityModel::for_matrix(SymMatrix::identity(2));
    const MilpSolution s = min_quadratic_over_simplex_milp(model);
    CHECK(s.objective == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.y(0) == doctest::Approx(0.5));
    CHECK(s.y(1) == doctest::Approx(0.5));
    CHECK(s.z == Vector{{1.0, 1.0}});
  }
  SUBCASE("[[1,-2],[-2,1]]") {
    const SymMatrix x = sym2(1, -2, 1);
    // y^T X y = 6t^2 - 6t + 1 on y = (t, 1 - t); minimum at t = 1/2.
    CHECK(grid_min_2d(x) == doctest::Approx(-0.5).epsilon(1e-9));
    const MilpSolution s = min_quadratic_over_simplex_milp(CopositivityModel::for_matrix(x));
    CHECK(s.objective == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(s.y(0) == doctest::Approx(0.5));
  }
  SUBCASE("diag(1,-3)") {
    const MilpSolution s = min_quadratic_over_simplex_milp(CopositivityModel::for_matrix(sym2(1, 0, -3)));
    CHECK(s.objective == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(s.y(0) == doctest::Approx(0.0));
    CHECK(s.y(1) == doctest::Approx(1.0));
    CHECK(s.z == Vector{{0.0, 1.0}});
  }
  SUBCASE("d = 1 is decided without branching") {
    Matrix m(1, 1);
    m << -2.0;
    BranchAndBoundStats stats;
    const auto s = branch_and_bound(CopositivityModel::for_matrix(SymMatrix::from_dense(m)), &stats);
    REQUIRE(s.has_value());
    CHECK(s->objective == doctest::Approx(-2.0));
    CHECK(stats.branchings == 0);
    CHECK(stats.nodes == 1);
  }
}

TEST_CASE("bigM follows 2 d max|X|") {
  CHECK(CopositivityModel::for_matrix(sym2(1, -2, 1)).big_m == 8.0);
  CHECK(CopositivityModel::for_matrix(SymMatrix::identity(3)).big_m == 6.0);
}

TEST_CASE("excluding every pattern makes the model infeasible") {
  auto model = CopositivityModel::for_matrix(SymMatrix::identity(2));
  model.excluded_patterns = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK_FALSE(branch_and_bound(model).has_value());
  CHECK_THROWS_AS(min_quadratic_over_simplex_milp(model), InfeasibleModel);
  CHECK_FALSE(solve_model(model).has_value());
}

TEST_CASE("fixed binaries restrict the support to KKT points") {
  // e_1 is a KKT point of [[1,2],[2,-3]] ((X e_1)_2 >= (X e_1)_1) but not of diag(1,-3).
  auto model = CopositivityModel::for_matrix(sym2(1, 2, -3));
  model.fixed_z = {1, 0};
  const auto s = branch_and_bound(model);
  REQUIRE(s.has_value());
  CHECK(s->objective == doctest::Approx(1.0));
  CHECK(s->y(0) == doctest::Approx(1.0));

  auto no_kkt = CopositivityModel::for_matrix(sym2(1, 0, -3));
  no_kkt.fixed_z = {1, 0};
  CHECK_FALSE(branch_and_bound(no_kkt).has_value());
}

TEST_CASE("brute-force simplex minimum") {
  const SimplexMinimum m3 = brute_force_simplex_min(SymMatrix::identity(3));
  CHECK(m3.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // 2t^2 + 3(1-t)^2 is minimised at t = 3/5, not at a vertex.
  const SymMatrix d23 = sym2(2, 0, 3);
  const SimplexMinimum md = brute_force_simplex_min(d23);
  CHECK(grid_min_2d(d23) == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(md.value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(md.y(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK_THROWS_AS(brute_force_simplex_min(SymMatrix(21)), DimensionError);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix x = SymMatrix::from_dense(testing::random_symmetric(2, rng));
    CHECK(brute_force_simplex_min(x).value == doctest::Approx(grid_min_2d(x)).epsilon(1e-8));
  }
}

TEST_CASE("round_pattern rounds half up") {
  CHECK(round_pattern(Vector{{0.0, 0.49, 0.5, 0.51, 1.0}}) == Pattern{0, 0, 1, 1, 1});
}

TEST_CASE("solve_model leaves complementary solutions untouched") {
  const auto model = CopositivityModel::for_matrix(sym2(1, -2, 1));
  const auto direct = branch_and_bound(model);
  const auto wrapped = solve_model(model);
  REQUIRE(direct.has_value());
  REQUIRE(wrapped.has_value());
  CHECK(direct->y == wrapped->y);
  CHECK(direct->objective == wrapped->objective);
}

TEST_CASE("solve_model repairs a non-complementary solution") {
  const auto base = CopositivityModel::for_matrix(sym2(1, -2, 1));

  // Reports a bogus point violating y^T nu = 0 on the unrestricted model.
  auto bogus = [&](const CopositivityModel&) {
    MilpSolution s;
    s.y = Vector{{0.6, 0.4}};
    s.z = Vector{{0.6, 0.4}};
    s.nu = Vector{{1.0, 1.0}};
    s.mu = 10.0;
    s.objective = -10.0;
    return s;
  };

  SUBCASE("fixed model infeasible: result comes from the excluded branch") {
    int calls = 0;
    MilpSolver solver = [&](const CopositivityModel& m) -> std::optional<MilpSolution> {
      ++calls;
      if (m.fixed_z.empty() && m.excluded_patterns.empty()) return bogus(m);
      if (!m.fixed_z.empty()) return std::nullopt;
      return branch_and_bound(m);
    };
    auto excluded = base;
    excluded.excluded_patterns = {Pattern{1, 0}};
    const auto expected = branch_and_bound(excluded);
    const auto got = solve_model(base, std::numeric_limits<double>::infinity(), solver);
    REQUIRE(expected.has_value());
    REQUIRE(got.has_value());
    CHECK(got->objective == doctest::Approx(expected->objective).epsilon(1e-12));
    CHECK(got->y == expected->y);
    CHECK(calls >= 3);
  }

  SUBCASE("fixed model better than the excluded branch") {
    MilpSolver solver = [&](const CopositivityModel& m) -> std::optional<MilpSolution> {
      if (m.fixed_z.empty() && m.excluded_patterns.empty()) return bogus(m);
      return branch_and_bound(m);
    };
    const auto got = solve_model(base, std::numeric_limits<double>::infinity(), solver);
    REQUIRE(got.has_value());
    // Round(0.6, 0.4) = (1, 0): y = e_1 with value 1; the excluded branch
    // still contains the true minimiser with value -1/2.
    CHECK(got->objective == doctest::Approx(-0.5).epsilon(1e-9));
  }
}

TEST_CASE("test_copositive verdicts") {
  for (int d = 1; d <= 10; ++d) {
    const OracleVerdict v = test_copositive(SymMatrix::identity(d));
    CHECK(v.copositive);
    CHECK_FALSE(v.cut.has_value());
  }
  CHECK(test_copositive(SymMatrix(4)).copositive);

  Vector diag = Vector::Ones(4);
  diag(2) = -1.0;
  const OracleVerdict v = test_copositive(SymMatrix::diagonal(diag));
  CHECK_FALSE(v.copositive);
  REQUIRE(v.cut.has_value());
  CHECK(v.cut->value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(v.cut->y(2) == doctest::Approx(1.0).epsilon(1e-9));

  const SymMatrix h = SymMatrix::from_dense(testing::horn());
  CHECK(std::abs(brute_force_simplex_min(h).value) <= 1e-12);
  CHECK(test_copositive(h).copositive);
}

TEST_CASE("MILP agrees with brute force on random matrices") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix x = SymMatrix::from_dense(testing::random_symmetric(6, rng));
    const auto model = CopositivityModel::for_matrix(x);
    const MilpSolution s = min_quadratic_over_simplex_milp(model);
    const SimplexMinimum ref = brute_force_simplex_min(x);
    CHECK(std::abs(s.objective - ref.value) <= 1e-6);
    CHECK(std::abs(x.quadratic_form(s.y) - s.objective) <= 1e-7);
    check_solution_invariants(model, s);
  }
}

TEST_CASE("verdict soundness, scale covariance and bigM invariance") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const SymMatrix x = SymMatrix::from_dense(testing::random_symmetric(d, rng));
    const OracleVerdict v = test_copositive(x);
    const double ref = brute_force_simplex_min(x).value;
    if (v.copositive) {
      CHECK(ref >= -1e-9);
    } else {
      REQUIRE(v.cut.has_value());
      CHECK(std::abs(v.cut->y.sum() - 1.0) <= 1e-12);
      CHECK(v.cut->y.minCoeff() >= 0.0);
      CHECK(x.quadratic_form(v.cut->y) < 0.0);
    }

    const double base = min_quadratic_over_simplex_milp(CopositivityModel::for_matrix(x)).objective;
    for (double alpha : {0.1, 10.0}) {
      const double scaled = min_quadratic_over_simplex_milp(CopositivityModel::for_matrix(x.scaled(alpha))).objective;
      CHECK(scaled == doctest::Approx(alpha * base).epsilon(1e-8).scale(1.0));
      CHECK(test_copositive(x.scaled(alpha)).copositive == v.copositive);
    }

    auto doubled = CopositivityModel::for_matrix(x);
    doubled.big_m *= 2.0;
    CHECK(min_quadratic_over_simplex_milp(doubled).objective == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("doubly nonnegative matrices are copositive") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 6;
    Matrix b(d, d + 1);
    for (Eigen::Index j = 0; j < d + 1; ++j) b.col(j) = testing::random_vector(d, rng, 0.0, 1.0);
    Matrix m = b * b.transpose();
    m = 0.5 * (m + m.transpose()).eval();
    CHECK(test_copositive(SymMatrix::from_dense(m)).copositive);
  }
}

TEST_CASE("branch-and-bound is deterministic") {
  std::mt19937_64 rng(4);
  const SymMatrix x = SymMatrix::from_dense(testing::random_symmetric(7, rng));
  BranchAndBoundStats s1, s2;
  const auto a = branch_and_bound(CopositivityModel::for_matrix(x), &s1);
  const auto b = branch_and_bound(CopositivityModel::for_matrix(x), &s2);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->y == b->y);
  CHECK(a->objective == b->objective);
  CHECK(s1.nodes == s2.nodes);
  CHECK(s1.lp_iterations == s2.lp_iterations);
}

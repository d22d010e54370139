// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-cpa>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpa/analytic_center.hpp"
#include "cpa/copositivity.hpp"
#include "cpa/cp_interface.hpp"
#include "cpa/cutting_plane.hpp"
#include "cpa/matrix_io.hpp"
#include "test_support.hpp"

using namespace cpa;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++failures;
  char time_buf[32];
  std::snprintf(time_buf, sizeof time_buf, "%.1fs", secs);
  std::cout << "criterion " << id << " " << (out.pass ? "PASS" : "FAIL") << "  " << name << ": "
            << out.detail << " [" << time_buf << "]" << std::endl;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// ---------------------------------------------------------------- bodies

struct RandomBody {
  ConvexBody body;
  Vector center;
  bool centered = false;
};

RandomBody make_body(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 6);
  const Eigen::Index n = dim(rng);
  std::uniform_int_distribution<int> count(static_cast<int>(n) + 1, 20);
  const int m = count(rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomBody rb{ConvexBody(n, 1.0), Vector(), false};
  for (int i = 0; i < m; ++i) {
    const Vector a = testing::unit_gaussian(n, rng);
    // A quarter of the cuts sit outside the ball and are redundant.
    const double b = u(rng) < 0.25 ? 1.0 + 4.0 * u(rng) : 0.05 + 0.95 * u(rng);
    rb.body.add_constraint(a, b);
  }
  const CenterResult c = analytic_center(rb.body, Vector::Zero(n));
  rb.center = c.x_star;
  rb.centered = c.status == CenterStatus::Success;
  return rb;
}

// Feasible interval of x + t d inside the body.
std::pair<double, double> chord(const ConvexBody& body, const Vector& x, const Vector& d) {
  const double r = body.radius();
  const double bq = x.dot(d), cq = x.squaredNorm() - r * r;
  const double disc = std::sqrt(std::max(0.0, bq * bq - cq));
  double lo = -bq - disc, hi = -bq + disc;
  const Vector s = body.linear_slacks(x);
  for (Eigen::Index i = 0; i < body.num_constraints(); ++i) {
    const double ad = body.normal(i).dot(d);
    if (ad > 0) hi = std::min(hi, s(i) / ad);
    if (ad < 0) lo = std::max(lo, s(i) / ad);
  }
  return {lo, hi};
}

// Hit-and-run points of the body starting at an interior point; every step
// also contributes both chord endpoints (boundary points).
std::vector<Vector> sample_body(const ConvexBody& body, const Vector& start, int count,
                                std::mt19937_64& rng) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x = start;
  while (static_cast<int>(out.size()) < count) {
    const Vector d = testing::unit_gaussian(body.dim(), rng);
    const auto [lo, hi] = chord(body, x, d);
    out.push_back(x + lo * d);
    out.push_back(x + hi * d);
    x = x + (lo + (hi - lo) * u(rng)) * d;
    out.push_back(x);
  }
  out.resize(static_cast<std::size_t>(count));
  return out;
}

std::vector<RandomBody> bodies() {
  static std::vector<RandomBody> cache = [] {
    std::mt19937_64 rng(20240501);
    std::vector<RandomBody> v;
    for (int i = 0; i < 50; ++i) v.push_back(make_body(rng));
    return v;
  }();
  return cache;
}

// ---------------------------------------------------------------- criteria

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1);
  int mismatched = 0, verdict_mismatch = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index d = 2 + i % 7;
    const SymMatrix x = SymMatrix::from_dense(testing::random_symmetric(d, rng));
    const double milp = min_quadratic_over_simplex_milp(CopositivityModel::for_matrix(x)).objective;
    const double ref = brute_force_simplex_min(x).value;
    const double diff = std::abs(milp - ref);
    worst = std::max(worst, diff);
    if (diff > 1e-6) ++mismatched;
    const bool ref_copositive = !(ref < -copositivity_tol(x));
    if (test_copositive(x).copositive != ref_copositive) ++verdict_mismatch;
  }
  std::ostringstream s;
  s << "200 matrices, max |milp - brute| = " << worst << ", value mismatches " << mismatched
    << ", verdict mismatches " << verdict_mismatch;
  return {mismatched == 0 && verdict_mismatch == 0, s.str()};
}

Outcome newton_centering() {
  struct Case {
    ConvexBody body;
    Vector x0;
    double expected;
  };
  std::vector<Case> cases;
  cases.push_back({ConvexBody(1, 1.0), Vector::Constant(1, 0.5), 0.0});
  {
    ConvexBody b(1, 2.0);
    b.add_constraint(Vector::Constant(1, 1.0), 1.0);
    b.add_constraint(Vector::Constant(1, -1.0), 1.0);
    cases.push_back({b, Vector::Constant(1, 0.5), 0.0});
  }
  {
    ConvexBody b(1, 2.0);
    b.add_constraint(Vector::Constant(1, 1.0), 0.0);
    cases.push_back({b, Vector::Constant(1, 1.0), -2.0 / std::sqrt(3.0)});
  }
  bool ok = true;
  std::ostringstream s;
  for (const Case& c : cases) {
    const CenterResult r = analytic_center(c.body, c.x0);
    const bool good = r.status == CenterStatus::Success && r.grad_norm <= 1e-8 &&
                      r.iterations <= 50 && std::abs(r.x_star(0) - c.expected) <= 1e-6;
    ok = ok && good;
    s << "x*=" << r.x_star(0) << " (" << r.iterations << " it, |g|=" << r.grad_norm << ") ";
  }
  return {ok, s.str()};
}

Outcome dikin_sandwich() {
  std::mt19937_64 rng(7);
  int uncentered = 0, axis_violations = 0, bound_violations = 0;
  double worst_ratio = 0.0;
  for (const RandomBody& rb : bodies()) {
    if (!rb.centered) {
      ++uncentered;
      continue;
    }
    const Eigen::Index n = rb.body.dim();
    const double m = static_cast<double>(rb.body.num_constraints());
    const Matrix h = barrier_hessian(rb.body, rb.center);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector axis = eig.eigenvectors().col(j) / std::sqrt(eig.eigenvalues()(j));
      for (double sign : {1.0, -1.0})
        if (!rb.body.contains(rb.center + sign * axis, 1e-8)) ++axis_violations;
    }
    for (const Vector& x : sample_body(rb.body, rb.center, 1000, rng)) {
      const Vector d = x - rb.center;
      const double q = d.dot(h * d);
      worst_ratio = std::max(worst_ratio, q / ((m + 1) * (m + 1)));
      if (q > (m + 1) * (m + 1) + 1e-8) ++bound_violations;
    }
  }
  std::ostringstream s;
  s << "50 bodies, centering failures " << uncentered << ", axis violations " << axis_violations
    << ", bound violations " << bound_violations << ", max q/(m+1)^2 = " << worst_ratio;
  return {uncentered == 0 && axis_violations == 0 && bound_violations == 0, s.str()};
}

Outcome pruning_safety() {
  std::mt19937_64 rng(8);
  int removed_total = 0, violations = 0, uncentered = 0;
  for (const RandomBody& rb : bodies()) {
    if (!rb.centered) {
      ++uncentered;
      continue;
    }
    // m_max = m isolates the eta >= m + 1 rule.
    const PruneResult p = prune(rb.body, rb.center, rb.body.num_constraints());
    removed_total += static_cast<int>(p.removed.size());
    if (p.removed.empty()) continue;
    for (const Vector& x : sample_body(p.body, rb.center, 10000, rng)) {
      for (Eigen::Index i : p.removed)
        if (rb.body.normal(i).dot(x) > rb.body.offset(i) + 1e-8) ++violations;
    }
  }
  std::ostringstream s;
  s << "constraints removed " << removed_total << ", violations " << violations;
  return {uncentered == 0 && violations == 0 && removed_total > 0, s.str()};
}

Outcome cp_dichotomy() {
  int cp_ok = 0, ncp_ok = 0;
  double worst_cp = 0.0;
  std::ostringstream bad;
  for (int i = 0; i < 30; ++i) {
    const Eigen::Index d = 2 + i % 7;
    const Certificate cert = completely_positive_cut(make_random_cp(d, 2 * d, 100 + i));
    worst_cp = std::min(worst_cp, cert.objective);
    if (cert.verdict == Verdict::CompletelyPositive && cert.objective >= -1e-4) {
      ++cp_ok;
    } else {
      bad << " cp#" << i << "=" << to_string(cert.verdict);
    }
  }
  std::vector<SymMatrix> negatives{SymMatrix::diagonal(Vector{{1.0, -1.0}})};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.5);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Index d = 2 + i % 7;
    SymMatrix c = make_random_cp(d, 2 * d, 200 + i);
    const Eigen::Index k = i % d;
    c.set(k, k, -u(rng));
    negatives.push_back(c);
  }
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const Certificate cert = completely_positive_cut(negatives[i]);
    if (cert.verdict == Verdict::NotCompletelyPositive && cert.cut_matrix &&
        verify_cut(negatives[i], *cert.cut_matrix)) {
      ++ncp_ok;
    } else {
      bad << " ncp#" << i << "=" << to_string(cert.verdict);
    }
  }
  std::ostringstream s;
  s << "completely positive " << cp_ok << "/30 (min objective " << worst_cp
    << "), rejected with verified cut " << ncp_ok << "/11" << bad.str();
  return {cp_ok == 30 && ncp_ok == 11, s.str()};
}

Outcome accp_vs_ellipsoid() {
  bool ok = true;
  std::ostringstream s;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SymMatrix c = SymMatrix::from_dense(testing::gaussian_gram(6, seed));
    CpOptions accp_opt, ell_opt;
    ell_opt.solver = SolverKind::Ellipsoid;
    const Certificate a = completely_positive_cut(c, accp_opt);
    const Certificate e = completely_positive_cut(c, ell_opt);
    const double rel = std::abs(a.objective - e.objective) /
                       std::max({std::abs(a.objective), std::abs(e.objective), 1e-12});
    const double ratio = static_cast<double>(e.trace.oracle_calls) / std::max(1, a.trace.oracle_calls);
    const bool good = a.verdict == Verdict::NotCompletelyPositive &&
                      e.verdict == Verdict::NotCompletelyPositive && rel <= 1e-4 && ratio >= 10.0;
    ok = ok && good;
    s << "[seed " << seed << ": " << a.trace.oracle_calls << " vs " << e.trace.oracle_calls
      << " calls, rel diff " << rel << "] ";
  }
  return {ok, s.str()};
}

Outcome scaling(const fs::path& cpa, const fs::path& work) {
  const fs::path dir = work / "scaling";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (int d : {6, 8, 10}) {
    for (int seed = 1; seed <= 3; ++seed) {
      const fs::path out = dir / ("cp_d" + std::to_string(d) + "_s" + std::to_string(seed) + ".txt");
      if (run(quote(cpa) + " generate --dim " + std::to_string(d) + " --rank " + std::to_string(d) +
              " --seed " + std::to_string(seed) + " --out " + quote(out)) != 0)
        return {false, "generate failed"};
    }
  }
  const fs::path json = work / "scaling.json";
  const int code = run(quote(cpa) + " bench " + quote(dir) + " --json " + quote(json) +
                       " --csv " + quote(work / "scaling.csv") + " 2>/dev/null");
  if (code != 0) return {false, "bench exited with " + std::to_string(code)};
  const nlohmann::json j = nlohmann::json::parse(slurp(json));
  if (j["growth"].is_null()) return {false, "no growth fit"};
  const double exponent = j["growth"]["exponent"].get<double>();
  std::ostringstream s;
  s << "exponent " << exponent << ", calls:";
  for (const auto& row : j["rows"]) s << " d" << row["d"].get<int>() << "=" << row["oracle_calls"].get<int>();
  return {exponent >= 1.0 && exponent <= 2.5, s.str()};
}

Outcome determinism(const fs::path& cpa, const fs::path& work) {
  const fs::path dir = work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir / "instances");
  const std::string c = quote(cpa);
  std::vector<std::string> differing;

  auto twice = [&](const std::string& label, const std::function<std::string(int)>& cmd,
                   const std::function<std::string(int)>& artifact) {
    for (int r = 0; r < 2; ++r) run(cmd(r));
    if (slurp(artifact(0)) != slurp(artifact(1)) || slurp(artifact(0)).empty()) differing.push_back(label);
  };
  auto file = [&](const std::string& stem) {
    return [&, stem](int r) { return (dir / (stem + std::to_string(r))).string(); };
  };

  twice("generate", [&](int r) { return c + " generate --dim 5 --rank 4 --seed 9 --out " + quote(file("gen")(r)); },
        file("gen"));
  const fs::path instance = dir / "gen0";
  const fs::path negative = dir / "neg.txt";
  io::write_file(negative, "3\n1 -0.9 0.2\n-0.9 1 0.3\n0.2 0.3 -0.1");
  twice("check-copositive",
        [&](int r) { return c + " check-copositive " + quote(negative) + " > " + quote(file("chk")(r)); },
        file("chk"));
  for (const std::string solver : {"accp", "ellipsoid"}) {
    twice("cp-cut " + solver,
          [&](int r) {
            return c + " cp-cut " + quote(negative) + " --solver " + solver + " --out " +
                   quote(file("cert_" + solver)(r)) + " > /dev/null";
          },
          file("cert_" + solver));
  }
  twice("cp-cut cp instance",
        [&](int r) { return c + " cp-cut " + quote(instance) + " --out " + quote(file("cert_cp")(r)) + " > /dev/null"; },
        file("cert_cp"));

  for (int d : {3, 4}) {
    run(c + " generate --dim " + std::to_string(d) + " --rank " + std::to_string(d) + " --seed 1 --out " +
        quote(dir / "instances" / ("g" + std::to_string(d) + ".txt")));
  }
  fs::copy_file(negative, dir / "instances" / "neg.txt");
  twice("bench csv",
        [&](int r) {
          return c + " bench " + quote(dir / "instances") + " --no-timing --csv " + quote(file("csv")(r)) +
                 " --json " + quote(file("json")(r)) + " > /dev/null 2>&1";
        },
        file("csv"));
  if (slurp(file("json")(0)) != slurp(file("json")(1)) || slurp(file("json")(0)).empty())
    differing.push_back("bench json");

  std::string detail = "generate, check-copositive, cp-cut (accp, ellipsoid), bench csv/json";
  if (!differing.empty()) {
    detail += "; differing:";
    for (const auto& d : differing) detail += " " + d;
  }
  return {differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cpa>\n";
    return 2;
  }
  const fs::path cpa = fs::absolute(argv[1]);
  const fs::path work = fs::temp_directory_path() / "cpa_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "newton centering", newton_centering);
  report(3, "dikin sandwich", dikin_sandwich);
  report(4, "pruning safety", pruning_safety);
  report(5, "cp dichotomy", cp_dichotomy);
  report(6, "accp vs ellipsoid", accp_vs_ellipsoid);
  report(7, "scaling harness", [&] { return scaling(cpa, work); });
  report(8, "determinism", [&] { return determinism(cpa, work); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

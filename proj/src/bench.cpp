#include "cpa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cpa/log.hpp"
#include "cpa/matrix_io.hpp"

namespace cpa::bench {

std::optional<Growth> fit_growth(const std::vector<Row>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const Row& r : rows) {
    if (r.oracle_calls > 0 && r.d > 0) {
      pts.emplace_back(std::log(static_cast<double>(r.d)), std::log(static_cast<double>(r.oracle_calls)));
    }
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double slope = sxy / sxx;
  return Growth{slope, std::exp(my - slope * mx)};
}

Report run(const std::filesystem::path& dir, const CpOptions& options, bool timing) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  Report report;
  for (const auto& path : files) {
    Row row;
    row.name = path.filename().string();
    try {
      const SymMatrix c = io::read_matrix_file(path);
      row.d = c.dim();
      const auto start = std::chrono::steady_clock::now();
      const Certificate cert = completely_positive_cut(c, options);
      const auto stop = std::chrono::steady_clock::now();
      row.objective = cert.objective;
      row.oracle_calls = cert.trace.oracle_calls;
      row.verdict = cert.verdict;
      if (timing) {
        row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
      }
    } catch (const Error& e) {
      log::info("bench: " + row.name + ": " + e.what());
      row.verdict = Verdict::Inconclusive;
    }
    log::info("bench: " + row.name + " d=" + std::to_string(row.d) + " calls=" +
              std::to_string(row.oracle_calls) + " verdict=" + to_string(row.verdict));
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const Row& a, const Row& b) {
    if (a.d != b.d) return a.d < b.d;
    return a.name < b.name;
  });
  report.growth = fit_growth(report.rows);
  return report;
}

std::string to_csv(const Report& report) {
  std::string out = "name,d,objective,oracle_calls,millis,verdict\n";
  for (const Row& r : report.rows) {
    out += r.name + ',' + std::to_string(r.d) + ',' + io::format_double(r.objective) + ',' +
           std::to_string(r.oracle_calls) + ',' + std::to_string(r.millis) + ',' +
           to_string(r.verdict) + '\n';
  }
  return out;
}

nlohmann::json to_json(const Report& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& r : report.rows) {
    rows.push_back({{"name", r.name},
                    {"d", r.d},
                    {"objective", r.objective},
                    {"oracle_calls", r.oracle_calls},
                    {"millis", r.millis},
                    {"verdict", to_string(r.verdict)}});
  }
  nlohmann::json doc;
  doc["rows"] = std::move(rows);
  if (report.growth) {
    doc["growth"] = {{"exponent", report.growth->exponent}, {"coefficient", report.growth->coefficient}};
  } else {
    doc["growth"] = nullptr;
  }
  return doc;
}

}  // namespace cpa::bench

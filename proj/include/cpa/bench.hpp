#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpa/cp_interface.hpp"

namespace cpa::bench {

struct Row {
  std::string name;
  Eigen::Index d = 0;
  double objective = 0.0;
  int oracle_calls = 0;
  long long millis = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// oracle_calls ~ coefficient * d^exponent, least squares in log-log space.
struct Growth {
  double exponent = 0.0;
  double coefficient = 0.0;
};

struct Report {
  std::vector<Row> rows;
  std::optional<Growth> growth;
};

/// Fits the growth law over rows with positive oracle_calls; needs at least
/// two distinct dimensions.
std::optional<Growth> fit_growth(const std::vector<Row>& rows);

/// Runs completely_positive_cut on every regular file of `dir`. Rows are
/// sorted by (d, name); unreadable instances become inconclusive rows with
/// d = 0. With `timing` false the millis column is written as 0 so reports
/// are byte-reproducible.
Report run(const std::filesystem::path& dir, const CpOptions& options, bool timing = true);

/// Header: name,d,objective,oracle_calls,millis,verdict
std::string to_csv(const Report& report);
nlohmann::json to_json(const Report& report);

}  // namespace cpa::bench

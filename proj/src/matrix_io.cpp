#include "cpa/matrix_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace cpa::io {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

std::string where(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      tokens.push_back({line.substr(start, i - start), line_no, start + 1});
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++line_no;
  }
  return lines;
}

double parse_real(const Token& t) {
  double v = 0.0;
  std::string_view s = t.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(where(t.line, t.column) + ": expected a finite real, got '" +
                     std::string(t.text) + "'");
  }
  return v;
}

void check_symmetry(const Matrix& m, const std::function<std::string(Eigen::Index, Eigen::Index)>& locate) {
  const double scale = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw ParseError(locate(j, i) + ": matrix is not symmetric (entry (" + std::to_string(j + 1) +
                         "," + std::to_string(i + 1) + ") differs from (" + std::to_string(i + 1) +
                         "," + std::to_string(j + 1) + "))");
      }
    }
  }
}

}  // namespace

SymMatrix parse_dense_text(std::string_view text) {
  const auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError("line 1, column 1: empty matrix file");
  const auto& header = lines.front();
  if (header.size() != 1) {
    throw ParseError(where(header[1].line, header[1].column) + ": first line must hold only the dimension");
  }
  long long d = 0;
  {
    const Token& t = header[0];
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), d);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || d < 1) {
      throw ParseError(where(t.line, t.column) + ": dimension must be a positive integer, got '" +
                       std::string(t.text) + "'");
    }
  }
  if (static_cast<long long>(lines.size()) - 1 != d) {
    const std::size_t line = lines.size() > static_cast<std::size_t>(d) ? lines[static_cast<std::size_t>(d) + 1].front().line
                                                                        : lines.back().front().line + 1;
    throw ParseError(where(line, 1) + ": expected " + std::to_string(d) + " rows, found " +
                     std::to_string(lines.size() - 1));
  }
  Matrix m(d, d);
  for (long long i = 0; i < d; ++i) {
    const auto& row = lines[static_cast<std::size_t>(i) + 1];
    if (static_cast<long long>(row.size()) != d) {
      const Token& t = row.size() > static_cast<std::size_t>(d) ? row[static_cast<std::size_t>(d)] : row.back();
      throw ParseError(where(t.line, t.column) + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(d));
    }
    for (long long j = 0; j < d; ++j) m(i, j) = parse_real(row[static_cast<std::size_t>(j)]);
  }
  check_symmetry(m, [&](Eigen::Index i, Eigen::Index j) {
    const Token& t = lines[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)];
    return where(t.line, t.column);
  });
  return SymMatrix::from_dense(m, 1e-12);
}

SymMatrix parse_json_matrix(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("rows")) {
    throw ParseError("json: expected an object with \"dim\" and \"rows\"");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw ParseError("json: \"dim\" must be a positive integer");
  }
  const auto d = doc["dim"].get<long long>();
  const auto& rows = doc["rows"];
  if (!rows.is_array() || static_cast<long long>(rows.size()) != d) {
    throw ParseError("json: \"rows\" must be an array of " + std::to_string(d) + " rows");
  }
  Matrix m(d, d);
  for (long long i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long long>(row.size()) != d) {
      throw ParseError("json: rows[" + std::to_string(i) + "] must hold " + std::to_string(d) + " numbers");
    }
    for (long long j = 0; j < d; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw ParseError("json: rows[" + std::to_string(i) + "][" + std::to_string(j) + "] is not a number");
      }
      m(i, j) = v.get<double>();
    }
  }
  check_symmetry(m, [](Eigen::Index i, Eigen::Index j) {
    return "json rows[" + std::to_string(i) + "][" + std::to_string(j) + "]";
  });
  return SymMatrix::from_dense(m, 1e-12);
}

SymMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (path.extension() == ".json" || (first != std::string::npos && text[first] == '{')) {
      return parse_json_matrix(text);
    }
    return parse_dense_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string to_dense_text(const SymMatrix& m) {
  std::string out = std::to_string(m.dim());
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    out += '\n';
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      if (j > 0) out += ' ';
      out += format_double(m(i, j));
    }
  }
  return out;
}

nlohmann::json to_json_matrix(const SymMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"rows", std::move(rows)}};
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error("cannot write " + path.string());
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json gaps = nlohmann::json::array();
  for (const IterationRecord& rec : cert.trace.iterations) {
    if (std::isfinite(rec.gap)) gaps.push_back(rec.gap);
  }
  nlohmann::json doc;
  doc["verdict"] = to_string(cert.verdict);
  doc["objective"] = cert.objective;
  doc["solver"] = to_string(cert.solver);
  doc["oracle_calls"] = cert.trace.oracle_calls;
  doc["feasible_hits"] = cert.trace.feasible_hits;
  doc["iterations"] = cert.trace.iterations.size();
  doc["lower_bound"] = finite_or_null(cert.lower_bound);
  doc["gap"] = finite_or_null(cert.gap);
  doc["near_boundary"] = cert.near_boundary;
  doc["cut_matrix"] = cert.cut_matrix ? nlohmann::json(to_dense_text(*cert.cut_matrix)) : nlohmann::json();
  doc["gap_trace"] = std::move(gaps);
  doc["message"] = cert.message;
  return doc;
}

}  // namespace cpa::io

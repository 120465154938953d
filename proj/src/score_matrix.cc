#include "sessionlink/score_matrix.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "sessionlink/errors.h"
#include "sessionlink/json_io.h"

namespace sessionlink {

ScoreMatrix::ScoreMatrix(std::size_t n)
    : n_(n), scores_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {
  ids_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i));
}

std::size_t ScoreMatrix::Offset(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_) {
    throw ShapeError("no score for pair (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") in a " + std::to_string(n_) +
                     "-session matrix");
  }
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

void ScoreMatrix::set_session_ids(std::vector<std::string> ids) {
  if (ids.size() != n_) {
    throw ShapeError("expected " + std::to_string(n_) + " session ids");
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    throw InvalidSpecError("session ids must be unique");
  }
  ids_ = std::move(ids);
}

bool ScoreMatrix::AllFinite() const {
  return std::all_of(scores_.begin(), scores_.end(),
                     [](double s) { return std::isfinite(s); });
}

void WriteScoreMatrix(const ScoreMatrix& matrix, std::ostream& out) {
  const auto& ids = matrix.session_ids();
  std::vector<std::tuple<std::string_view, std::string_view, double>> rows;
  rows.reserve(matrix.pair_count());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      std::string_view a = ids[i];
      std::string_view b = ids[j];
      if (b < a) std::swap(a, b);
      rows.emplace_back(a, b, matrix.at(i, j));
    }
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [a, b, score] : rows) {
    out << a << '\t' << b << '\t' << FormatDouble(score) << '\n';
  }
}

ScoreMatrix ReadScoreMatrix(std::istream& in) {
  std::map<std::pair<std::string, std::string>, double> rows;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, score_text;
    if (!std::getline(fields, a, '\t') || !std::getline(fields, b, '\t') ||
        !std::getline(fields, score_text)) {
      throw ParseError("expected three tab-separated columns", line_no);
    }
    char* end = nullptr;
    const double score = std::strtod(score_text.c_str(), &end);
    if (end == score_text.c_str() || *end != '\0') {
      throw ParseError("bad score '" + score_text + "'", line_no);
    }
    if (a == b) throw ParseError("self pair", line_no);
    if (b < a) std::swap(a, b);
    if (!rows.emplace(std::make_pair(a, b), score).second) {
      throw ParseError("duplicate pair", line_no);
    }
    ids.insert(a);
    ids.insert(b);
  }
  std::vector<std::string> ordered(ids.begin(), ids.end());
  ScoreMatrix matrix(ordered.size());
  if (rows.size() != matrix.pair_count()) {
    throw ParseError("score table is missing pairs", 0);
  }
  for (const auto& [pair, score] : rows) {
    const auto i = std::lower_bound(ordered.begin(), ordered.end(), pair.first) -
                   ordered.begin();
    const auto j = std::lower_bound(ordered.begin(), ordered.end(), pair.second) -
                   ordered.begin();
    matrix.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), score);
  }
  matrix.set_session_ids(std::move(ordered));
  return matrix;
}

}  // namespace sessionlink

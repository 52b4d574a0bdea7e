#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "ortglab/common.hpp"
#include "ortglab/dataset.hpp"
#include "ortglab/error.hpp"

namespace ortglab {

double compute_ortg(double points_scored, double possessions) {
  if (!(possessions > 0.0)) {
    if (possessions == 0.0) throw DomainError("zero possessions");
    throw DomainError("possessions must be positive");
  }
  if (!(points_scored >= 0.0)) throw DomainError("points scored must be nonnegative");
  return 100.0 * points_scored / possessions;
}

const std::vector<std::string>& csv_columns() {
  static const auto columns = [] {
    std::vector<std::string> out{"season", "team", "ortg"};
    for (const auto& name : feature_names()) out.push_back(name);
    return out;
  }();
  return columns;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void check_header(std::string_view header) {
  const auto& expected = csv_columns();
  const auto got = split_commas(header);
  const std::size_t common = std::min(expected.size(), got.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (got[i] != expected[i]) {
      throw SchemaError(expected[i], "schema error: expected column '" + expected[i] +
                                         "' at position " + std::to_string(i + 1) +
                                         ", found '" + std::string(got[i]) + "'");
    }
  }
  if (got.size() < expected.size()) {
    const auto& missing = expected[got.size()];
    throw SchemaError(missing, "schema error: missing column '" + missing + "'");
  }
  if (got.size() > expected.size()) {
    const std::string extra(got[expected.size()]);
    throw SchemaError(extra, "schema error: unexpected column '" + extra + "'");
  }
}

}  // namespace

Dataset parse_dataset_csv(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw SchemaError("season", "schema error: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  check_header(line);

  const auto& columns = csv_columns();
  Dataset data;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (source.peek() == std::char_traits<char>::eof()) break;
      throw ValidationError(line_no, "empty line");
    }
    const auto cells = split_commas(line);
    if (cells.size() != columns.size()) {
      throw ValidationError(line_no, "expected " + std::to_string(columns.size()) + " cells, found " +
                                         std::to_string(cells.size()));
    }
    TeamSeasonRow row;
    row.season = std::string(cells[0]);
    row.team = std::string(cells[1]);
    if (row.season.empty()) throw ValidationError(line_no, "empty season");
    if (row.team.empty()) throw ValidationError(line_no, "empty team");
    if (!parse_double(cells[2], row.ortg)) {
      throw ValidationError(line_no, "ortg: not a number '" + std::string(cells[2]) + "'");
    }
    if (!std::isfinite(row.ortg) || row.ortg <= 0.0) {
      throw ValidationError(line_no, "ortg must be finite and positive");
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const auto cell = cells[3 + i];
      double v = 0.0;
      if (!parse_double(cell, v)) {
        throw ValidationError(line_no, columns[3 + i] + ": not a number '" + std::string(cell) + "'");
      }
      row.features[i] = v;
    }
    if (auto problem = check_feature_vector(row.features)) throw ValidationError(line_no, *problem);
    if (!seen.emplace(row.season, row.team).second) {
      throw ValidationError(line_no, "duplicate season/team " + row.season + " " + row.team);
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

Dataset parse_dataset_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dataset_csv(in);
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ArgumentError("data file not found: " + path.string());
  return parse_dataset_csv(read_file(path));
}

std::string serialize_dataset_csv(const Dataset& data) {
  std::string out;
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : data.rows) {
    out += row.season;
    out += ',';
    out += row.team;
    out += ',';
    out += format_double(row.ortg);
    for (double v : row.features.values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::uint64_t dataset_fingerprint(const Dataset& data) { return fnv1a64(serialize_dataset_csv(data)); }

}  // namespace ortglab

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ortglab/features.hpp"

namespace ortglab {

struct TeamSeasonRow {
  std::string season;  // e.g. "2015-16"
  std::string team;    // e.g. "SAC"
  double ortg = 0.0;   // points per 100 possessions
  FeatureVector features;
};

// Ordered team-season samples; order is the source order.
struct Dataset {
  std::vector<TeamSeasonRow> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

// 100 * points / possessions.
double compute_ortg(double points_scored, double possessions);

// The 51 canonical CSV column names in order.
const std::vector<std::string>& csv_columns();

Dataset parse_dataset_csv(std::istream& source);
Dataset parse_dataset_csv(std::string_view text);
Dataset load_dataset(const std::filesystem::path& path);

std::string serialize_dataset_csv(const Dataset& data);

// 64-bit content hash of the canonical CSV serialization.
std::uint64_t dataset_fingerprint(const Dataset& data);

}  // namespace ortglab

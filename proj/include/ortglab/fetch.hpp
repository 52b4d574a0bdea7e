#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>

#include "ortglab/features.hpp"

namespace ortglab {

struct RetryPolicy {
  std::size_t retries = 3;  // attempts = 1 + retries
  std::chrono::milliseconds initial_backoff{1000};
  double backoff_multiplier = 2.0;
  // Minimum spacing between requests to the same endpoint.
  std::chrono::milliseconds min_interval{600};
  std::chrono::seconds timeout{30};
};

// Name of the playtype in the upstream synergyplaytypes API.
std::string_view upstream_playtype_name(Playtype p);

// Builds the canonical CSV for one season from the nine upstream JSON
// payloads (eight team playtype tables plus advanced team stats). Throws
// TranslationError on an unrecognized or empty payload.
std::string translate_upstream(std::string_view season,
                               const std::array<std::string, kPlaytypeCount>& playtype_payloads,
                               const std::string& team_stats_payload);

// Downloads one season from `endpoint` (scheme://host[:port]) and returns
// the canonical CSV text. Nothing is returned on failure.
std::string fetch_playtype_stats(const std::string& endpoint, std::string_view season, const RetryPolicy& policy);

}  // namespace ortglab

#include "ortglab/fetch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ortglab/dataset.hpp"
#include "ortglab/error.hpp"

namespace ortglab {

using nlohmann::json;

std::string_view upstream_playtype_name(Playtype p) {
  switch (p) {
    case Playtype::isolation: return "Isolation";
    case Playtype::transition: return "Transition";
    case Playtype::pnr_ball_handler: return "PRBallHandler";
    case Playtype::pnr_roll_man: return "PRRollman";
    case Playtype::post_up: return "Postup";
    case Playtype::spot_up: return "Spotup";
    case Playtype::cut: return "Cut";
    case Playtype::off_screen: return "OffScreen";
  }
  return "?";
}

namespace {

// Upstream column for each metric, in Metric order.
constexpr std::array<const char*, kMetricCount> kUpstreamMetricColumns{
    "POSS_PCT", "FG_PCT", "FT_POSS_PCT", "TOV_POSS_PCT", "PLUSONE_POSS_PCT", "SCORE_POSS_PCT"};

struct Table {
  std::map<std::string, std::size_t> column;
  std::vector<json> rows;
};

Table result_table(std::string_view payload, const std::string& what) {
  json doc;
  try {
    doc = json::parse(payload);
  } catch (const json::parse_error&) {
    throw TranslationError(what + ": upstream payload is not JSON");
  }
  const json* set = nullptr;
  if (doc.contains("resultSets") && doc["resultSets"].is_array() && !doc["resultSets"].empty()) {
    set = &doc["resultSets"][0];
  } else if (doc.contains("resultSet") && doc["resultSet"].is_object()) {
    set = &doc["resultSet"];
  }
  if (set == nullptr || !set->contains("headers") || !set->contains("rowSet") || !(*set)["headers"].is_array() ||
      !(*set)["rowSet"].is_array()) {
    throw TranslationError(what + ": unrecognized upstream payload shape");
  }
  Table t;
  const auto& headers = (*set)["headers"];
  for (std::size_t i = 0; i < headers.size(); ++i) {
    if (!headers[i].is_string()) throw TranslationError(what + ": non-text header");
    t.column[headers[i].get<std::string>()] = i;
  }
  for (const auto& row : (*set)["rowSet"]) {
    if (!row.is_array() || row.size() != headers.size()) throw TranslationError(what + ": ragged row");
    t.rows.push_back(row);
  }
  if (t.rows.empty()) throw TranslationError(what + ": upstream returned no rows");
  return t;
}

std::size_t require(const Table& t, const std::string& name, const std::string& what) {
  auto it = t.column.find(name);
  if (it == t.column.end()) throw TranslationError(what + ": missing upstream column " + name);
  return it->second;
}

std::string id_text(const json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_string()) return v.get<std::string>();
  throw TranslationError("team id has an unexpected type");
}

double fraction(const json& v, const std::string& what) {
  if (v.is_null()) return 0.0;
  if (!v.is_number()) throw TranslationError(what + " is not numeric");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) throw TranslationError(what + " is outside [0,1]");
  return x;
}

}  // namespace

std::string translate_upstream(std::string_view season,
                               const std::array<std::string, kPlaytypeCount>& playtype_payloads,
                               const std::string& team_stats_payload) {
  struct Entry {
    std::string code;
    FeatureVector features;
    std::array<bool, kPlaytypeCount> seen{};
  };
  std::map<std::string, Entry> teams;  // keyed by upstream team id

  for (std::size_t p = 0; p < kPlaytypeCount; ++p) {
    const std::string what = std::string(upstream_playtype_name(kPlaytypes[p])) + " " + std::string(season);
    const Table t = result_table(playtype_payloads[p], what);
    const std::size_t id_col = require(t, "TEAM_ID", what);
    const std::size_t abbr_col = require(t, "TEAM_ABBREVIATION", what);
    std::array<std::size_t, kMetricCount> metric_cols{};
    for (std::size_t m = 0; m < kMetricCount; ++m) metric_cols[m] = require(t, kUpstreamMetricColumns[m], what);
    for (const auto& row : t.rows) {
      auto& e = teams[id_text(row[id_col])];
      if (!row[abbr_col].is_string()) throw TranslationError(what + ": team abbreviation is not text");
      e.code = row[abbr_col].get<std::string>();
      if (e.seen[p]) throw TranslationError(what + ": duplicate team " + e.code);
      e.seen[p] = true;
      for (std::size_t m = 0; m < kMetricCount; ++m) {
        const FeatureKey key{kPlaytypes[p], kMetrics[m]};
        e.features[key] = fraction(row[metric_cols[m]], what + " " + key.name());
      }
    }
  }

  const std::string what = "team stats " + std::string(season);
  const Table stats = result_table(team_stats_payload, what);
  const std::size_t id_col = require(stats, "TEAM_ID", what);
  const std::size_t ortg_col = require(stats, "OFF_RATING", what);
  std::map<std::string, double> ortg;
  for (const auto& row : stats.rows) {
    if (!row[ortg_col].is_number()) throw TranslationError(what + ": OFF_RATING is not numeric");
    ortg[id_text(row[id_col])] = row[ortg_col].get<double>();
  }

  Dataset data;
  for (auto& [id, e] : teams) {
    for (std::size_t p = 0; p < kPlaytypeCount; ++p) {
      if (!e.seen[p]) {
        throw TranslationError(e.code + " has no " + std::string(upstream_playtype_name(kPlaytypes[p])) + " row");
      }
    }
    auto it = ortg.find(id);
    if (it == ortg.end()) throw TranslationError(e.code + " is missing from the team stats payload");
    if (auto problem = check_feature_vector(e.features)) throw TranslationError(e.code + ": " + *problem);
    if (!(it->second > 0.0)) throw TranslationError(e.code + ": non-positive OFF_RATING");
    data.rows.push_back({std::string(season), e.code, it->second, e.features});
  }
  std::sort(data.rows.begin(), data.rows.end(),
            [](const TeamSeasonRow& a, const TeamSeasonRow& b) { return a.team < b.team; });
  return serialize_dataset_csv(data);
}

namespace {

std::mutex& endpoint_mutex(const std::string& endpoint) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard lock(registry_mutex);
  auto& m = registry[endpoint];
  if (!m) m = std::make_unique<std::mutex>();
  return *m;
}

class RateLimitedClient {
 public:
  RateLimitedClient(const std::string& endpoint, const RetryPolicy& policy)
      : endpoint_(endpoint), policy_(policy), client_(endpoint) {
    if (!client_.is_valid()) throw ArgumentError("unsupported endpoint '" + endpoint + "'");
    const auto secs = static_cast<time_t>(policy.timeout.count());
    client_.set_connection_timeout(secs, 0);
    client_.set_read_timeout(secs, 0);
    client_.set_follow_location(true);
    client_.set_default_headers({{"User-Agent", "Mozilla/5.0 (X11; Linux x86_64) ortg-lab"},
                                 {"Accept", "application/json, text/plain, */*"},
                                 {"Referer", "https://www.nba.com/"},
                                 {"Origin", "https://www.nba.com"}});
  }

  std::string get(const std::string& path) {
    std::lock_guard lock(endpoint_mutex(endpoint_));
    auto backoff = policy_.initial_backoff;
    std::string last_error;
    for (std::size_t attempt = 0; attempt <= policy_.retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff = std::chrono::milliseconds(
            static_cast<long long>(static_cast<double>(backoff.count()) * policy_.backoff_multiplier));
      }
      const auto now = std::chrono::steady_clock::now();
      if (last_request_ && now - *last_request_ < policy_.min_interval) {
        std::this_thread::sleep_for(policy_.min_interval - (now - *last_request_));
      }
      last_request_ = std::chrono::steady_clock::now();
      auto res = client_.Get(path);
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 200 && res->status < 300) return res->body;
      if (res->status >= 500 || res->status == 429) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      throw StatusError(res->status, "upstream returned HTTP " + std::to_string(res->status) + " for " + path);
    }
    if (last_error.rfind("HTTP ", 0) == 0) {
      throw StatusError(std::stoi(last_error.substr(5)),
                        "upstream returned " + last_error + " after " + std::to_string(policy_.retries + 1) + " attempts");
    }
    throw TransportError("cannot reach " + endpoint_ + " (" + last_error + ") after " +
                         std::to_string(policy_.retries + 1) + " attempts");
  }

 private:
  std::string endpoint_;
  RetryPolicy policy_;
  httplib::Client client_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
};

std::string query_escape(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == ' ') {
      out += "%20";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string fetch_playtype_stats(const std::string& endpoint, std::string_view season, const RetryPolicy& policy) {
  static const std::regex season_re(R"(\d{4}-\d{2})");
  if (!std::regex_match(std::string(season), season_re)) {
    throw ArgumentError("season must look like YYYY-YY, got '" + std::string(season) + "'");
  }
  RateLimitedClient client(endpoint, policy);
  const std::string season_type = query_escape("Regular Season");
  std::array<std::string, kPlaytypeCount> payloads;
  for (std::size_t p = 0; p < kPlaytypeCount; ++p) {
    payloads[p] = client.get("/stats/synergyplaytypes?LeagueID=00&PerMode=Totals&PlayType=" +
                             std::string(upstream_playtype_name(kPlaytypes[p])) +
                             "&PlayerOrTeam=T&SeasonType=" + season_type + "&SeasonYear=" + std::string(season) +
                             "&TypeGrouping=offensive");
  }
  const std::string stats = client.get(
      "/stats/leaguedashteamstats?LeagueID=00&MeasureType=Advanced&PerMode=PerGame&PaceAdjust=N&PlusMinus=N&Rank=N"
      "&Period=0&LastNGames=0&Month=0&OpponentTeamID=0&Season=" +
      std::string(season) + "&SeasonType=" + season_type);
  return translate_upstream(season, payloads, stats);
}

}  // namespace ortglab

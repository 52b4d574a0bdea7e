#include <json.hpp>

#include "ortglab/common.hpp"
#include "ortglab/optimize.hpp"

namespace ortglab {

using ojson = nlohmann::ordered_json;

std::string gameplan_json(const GameplanCandidate& g) {
  const auto& names = feature_names();
  ojson features = ojson::object();
  for (std::size_t j = 0; j < kFeatureCount; ++j) features[names[j]] = g.features[j];
  ojson locked = ojson::object();
  for (const auto& [j, v] : g.locked) locked[names[j]] = v;

  const auto report = hypothesis_check(g.features);
  ojson checks = ojson::array();
  for (const auto& c : report.checks) {
    ojson entry{{"id", c.id}, {"name", c.name}, {"value", c.value}, {"band", {c.lo, c.hi}},
                {"verdict", verdict_name(c.verdict)}};
    if (c.id == "ii") {
      entry["spotup_fg_pct"] = g.features[FeatureKey{Playtype::spot_up, Metric::fg_pct}];
      entry["fg_pct_min"] = bands::kSpotupFgMin;
      entry["fg_pct_target"] = {bands::kSpotupFgMin, bands::kSpotupFgTarget};
    }
    checks.push_back(std::move(entry));
  }
  ojson doc{{"predicted_ortg", g.predicted_ortg},
            {"features", features},
            {"active_constraints", g.active_constraints},
            {"locked", locked},
            {"hypothesis_checks", checks},
            {"hypotheses_within", report.within},
            {"region_fingerprint", hex64(g.region_fingerprint)}};
  return doc.dump(2) + "\n";
}

std::string sensitivity_json(const SensitivityReport& r) {
  const auto& names = feature_names();
  ojson entries = ojson::array();
  std::size_t rank = 1;
  for (const auto& e : r.ranking) {
    entries.push_back({{"rank", rank++},
                       {"feature", names[e.feature]},
                       {"mean_gradient", e.mean_gradient},
                       {"feature_std", e.feature_std},
                       {"score", e.score}});
  }
  return ojson{{"ranking", entries}}.dump(2) + "\n";
}

std::string sensitivity_csv(const SensitivityReport& r) {
  const auto& names = feature_names();
  std::string out = "rank,feature,mean_gradient,feature_std,score\n";
  std::size_t rank = 1;
  for (const auto& e : r.ranking) {
    out += std::to_string(rank++) + "," + names[e.feature] + "," + format_double(e.mean_gradient) + "," +
           format_double(e.feature_std) + "," + format_double(e.score) + "\n";
  }
  return out;
}

}  // namespace ortglab

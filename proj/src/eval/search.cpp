#include <algorithm>

#include <json.hpp>

#include "ortglab/error.hpp"
#include "ortglab/eval.hpp"

namespace ortglab {

std::vector<ArchitectureScore> search_mlp_architecture(const Dataset& data,
                                                       const std::vector<std::vector<std::size_t>>& candidates,
                                                       std::size_t k, const TrainConfig& cfg, FitScope scope,
                                                       std::size_t threads) {
  if (candidates.empty()) throw ArgumentError("architecture search needs at least one candidate shape");
  if (data.size() < 3) throw ArgumentError("architecture search needs at least 3 rows");
  std::vector<ArchitectureScore> scores;
  for (const auto& hidden : candidates) {
    if (hidden.empty()) throw ArgumentError("candidate shapes need at least one hidden layer");
    ModelSpec spec{ModelKind::mlp, hidden, k};
    const EvalReport report = run_loocv(data, spec, cfg, scope, threads);
    std::vector<std::size_t> sizes{k};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(1);
    ArchitectureScore s;
    s.hidden = hidden;
    s.parameters = MlpModel::zeros(sizes).parameter_count();
    s.rmse_ortg = report.rmse_ortg;
    s.rmse_normalized = report.rmse_normalized;
    s.r_squared = report.r_squared;
    scores.push_back(std::move(s));
  }
  std::stable_sort(scores.begin(), scores.end(), [](const ArchitectureScore& a, const ArchitectureScore& b) {
    if (a.rmse_ortg != b.rmse_ortg) return a.rmse_ortg < b.rmse_ortg;
    if (a.parameters != b.parameters) return a.parameters < b.parameters;
    return a.hidden < b.hidden;
  });
  return scores;
}

std::string search_report_json(const std::vector<ArchitectureScore>& ranking, std::size_t k, const TrainConfig& cfg) {
  nlohmann::json entries = nlohmann::json::array();
  std::size_t rank = 1;
  for (const auto& s : ranking) {
    entries.push_back({{"rank", rank++},
                       {"hidden_shape", s.hidden},
                       {"parameters", s.parameters},
                       {"rmse_ortg", s.rmse_ortg},
                       {"rmse_normalized", s.rmse_normalized},
                       {"r_squared", s.r_squared}});
  }
  nlohmann::json doc{{"k", k}, {"seed", cfg.seed}, {"restarts", cfg.restarts}, {"ranking", entries}};
  return doc.dump(2) + "\n";
}

}  // namespace ortglab

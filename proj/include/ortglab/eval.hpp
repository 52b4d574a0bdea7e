#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ortglab/dataset.hpp"
#include "ortglab/model.hpp"

namespace ortglab {

double rmse(std::span<const double> errors);
// 1 - SSE/SST, SST taken about the mean of `actual`.
double r_squared(std::span<const double> actual, std::span<const double> predicted);

// Where the normalizer and PCA are fitted: once on every row (global), or
// on the training rows of each fold (per_fold, leakage-free).
enum class FitScope { global, per_fold };

std::string_view fit_scope_name(FitScope scope);
FitScope parse_fit_scope(std::string_view text);

struct FoldResult {
  std::size_t index = 0;
  std::string season;
  std::string team;
  double actual = 0.0;     // ORTG points
  double predicted = 0.0;  // ORTG points
  // Both under the target normalizer fitted on all rows.
  double normalized_actual = 0.0;
  double normalized_predicted = 0.0;
};

struct EvalReport {
  ModelSpec spec;
  FitScope fit_scope = FitScope::global;
  TrainConfig train;
  std::vector<FoldResult> folds;
  double rmse_normalized = 0.0;
  double rmse_ortg = 0.0;
  double r_squared = 0.0;
  double target_min = 0.0;
  double target_max = 0.0;
};

// Leave-one-out: fold i trains on every row but i and predicts row i. The
// fold seed is cfg.seed ^ i, so results do not depend on `threads`.
EvalReport run_loocv(const Dataset& data, const ModelSpec& spec, const TrainConfig& cfg,
                     FitScope scope = FitScope::global, std::size_t threads = 1);

std::string eval_report_json(const EvalReport& report);
std::string predicted_vs_actual_csv(const EvalReport& report);

struct ArchitectureScore {
  std::vector<std::size_t> hidden;
  std::size_t parameters = 0;
  double rmse_ortg = 0.0;
  double rmse_normalized = 0.0;
  double r_squared = 0.0;
};

// Ranked ascending by LOOCV RMSE; ties go to fewer parameters, then the
// lexicographically smaller shape.
std::vector<ArchitectureScore> search_mlp_architecture(const Dataset& data,
                                                       const std::vector<std::vector<std::size_t>>& candidates,
                                                       std::size_t k, const TrainConfig& cfg,
                                                       FitScope scope = FitScope::global, std::size_t threads = 1);

std::string search_report_json(const std::vector<ArchitectureScore>& ranking, std::size_t k, const TrainConfig& cfg);

}  // namespace ortglab

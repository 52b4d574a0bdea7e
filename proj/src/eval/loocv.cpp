#include <exception>
#include <optional>

#include <json.hpp>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/eval.hpp"

namespace ortglab {

std::string_view fit_scope_name(FitScope scope) { return scope == FitScope::global ? "global" : "per-fold"; }

FitScope parse_fit_scope(std::string_view text) {
  if (text == "global") return FitScope::global;
  if (text == "per-fold" || text == "per_fold") return FitScope::per_fold;
  throw ArgumentError("unknown fit scope '" + std::string(text) + "' (expected global or per-fold)");
}

namespace {

Dataset without_row(const Dataset& data, std::size_t skip) {
  Dataset out;
  out.rows.reserve(data.size() - 1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i != skip) out.rows.push_back(data.rows[i]);
  }
  return out;
}

// Predicted ORTG for the held-out row, always through TrainedPredictor so
// evaluation shares the serving prediction path.
double run_fold(const Dataset& data, std::size_t fold, const ModelSpec& spec, const TrainConfig& cfg,
                FitScope scope, const TransformPipeline* global, const Eigen::MatrixXd* global_coords,
                const Eigen::VectorXd* global_targets) {
  TrainConfig fold_cfg = cfg;
  fold_cfg.seed = derive_seed(cfg.seed, fold);
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto f = static_cast<Eigen::Index>(fold);

  if (scope == FitScope::global) {
    Eigen::MatrixXd coords(n - 1, global_coords->cols());
    Eigen::VectorXd targets(n - 1);
    coords.topRows(f) = global_coords->topRows(f);
    coords.bottomRows(n - 1 - f) = global_coords->bottomRows(n - 1 - f);
    targets.head(f) = global_targets->head(f);
    targets.tail(n - 1 - f) = global_targets->tail(n - 1 - f);
    ModelParameters model = fit_model(spec, coords, targets, fold_cfg, nullptr);
    TrainedPredictor p(*global, std::move(model));
    return p.predict(data.rows[fold].features);
  }
  const Dataset train = without_row(data, fold);
  TrainedPredictor p = train_predictor(train, spec, fold_cfg);
  return p.predict(data.rows[fold].features);
}

}  // namespace

EvalReport run_loocv(const Dataset& data, const ModelSpec& spec, const TrainConfig& cfg, FitScope scope,
                     std::size_t threads) {
  if (data.size() < 3) throw ArgumentError("LOOCV needs at least 3 rows");
  if (spec.k >= data.size()) throw ArgumentError("PCA components must be fewer than the row count");
  cfg.validate();

  const TransformPipeline global = fit_pipeline(data, spec.k);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(spec.k));
  Eigen::VectorXd targets(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    coords.row(static_cast<Eigen::Index>(i)) = global.forward(data.rows[i].features).transpose();
    targets[static_cast<Eigen::Index>(i)] = global.normalize_target(data.rows[i].ortg);
  }

  std::vector<double> predicted(data.size());
  std::vector<std::optional<std::string>> failures(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) {
    try {
      predicted[i] = run_fold(data, i, spec, cfg, scope, &global, &coords, &targets);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (failures[i]) {
      throw TrainingError("fold " + std::to_string(i) + " (" + data.rows[i].season + " " + data.rows[i].team +
                          ") failed: " + *failures[i]);
    }
  }

  EvalReport report;
  report.spec = spec;
  report.fit_scope = scope;
  report.train = cfg;
  report.target_min = global.target_normalizer.min()[0];
  report.target_max = global.target_normalizer.max()[0];
  std::vector<double> err_norm;
  std::vector<double> err_ortg;
  std::vector<double> actual;
  for (std::size_t i = 0; i < data.size(); ++i) {
    FoldResult r;
    r.index = i;
    r.season = data.rows[i].season;
    r.team = data.rows[i].team;
    r.actual = data.rows[i].ortg;
    r.predicted = predicted[i];
    r.normalized_actual = global.normalize_target(r.actual);
    r.normalized_predicted = global.normalize_target(r.predicted);
    err_norm.push_back(r.normalized_predicted - r.normalized_actual);
    err_ortg.push_back(r.predicted - r.actual);
    actual.push_back(r.actual);
    report.folds.push_back(std::move(r));
  }
  report.rmse_normalized = rmse(err_norm);
  report.rmse_ortg = rmse(err_ortg);
  report.r_squared = r_squared(actual, predicted);
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : report.folds) {
    folds.push_back({{"index", f.index},
                     {"season", f.season},
                     {"team", f.team},
                     {"actual_ortg", f.actual},
                     {"predicted_ortg", f.predicted}});
  }
  nlohmann::json doc{{"model_kind", model_kind_name(report.spec.kind)},
                     {"k", report.spec.k},
                     {"fit_scope", fit_scope_name(report.fit_scope)},
                     {"seed", report.train.seed},
                     {"rmse_normalized", report.rmse_normalized},
                     {"rmse_ortg", report.rmse_ortg},
                     {"r_squared", report.r_squared},
                     {"target_min", report.target_min},
                     {"target_max", report.target_max},
                     {"folds", folds}};
  if (report.spec.kind == ModelKind::mlp) {
    doc["hidden_shape"] = report.spec.hidden;
    doc["restarts"] = report.train.restarts;
  }
  return doc.dump(2) + "\n";
}

std::string predicted_vs_actual_csv(const EvalReport& report) {
  std::string out = "season,team,actual_ortg,predicted_ortg\n";
  for (const auto& f : report.folds) {
    out += f.season + "," + f.team + "," + format_double(f.actual) + "," + format_double(f.predicted) + "\n";
  }
  return out;
}

}  // namespace ortglab

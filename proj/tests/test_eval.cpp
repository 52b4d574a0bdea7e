#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ortglab/error.hpp"
#include "ortglab/eval.hpp"
#include "ortglab/synthetic.hpp"
#include "support.hpp"

using namespace ortglab;

namespace {

TrainConfig small_mlp_config(std::uint64_t seed) {
  TrainConfig c;
  c.seed = seed;
  c.max_epochs = 150;
  c.restarts = 2;
  return c;
}

Dataset small_synthetic(std::uint64_t seed, std::size_t n) {
  return generate_synthetic_dataset(seed, n).data;
}

}  // namespace

TEST_CASE("rmse") {
  CHECK(rmse(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(rmse(std::vector<double>{1, -1}) == 1.0);
  CHECK(rmse(std::vector<double>{3, 4}) == doctest::Approx(3.5355339).epsilon(1e-8));
  CHECK_THROWS_AS(rmse(std::vector<double>{}), ArgumentError);
}

TEST_CASE("coefficient of determination") {
  const std::vector<double> a{1, 2, 3, 4};
  CHECK(r_squared(a, a) == 1.0);
  CHECK(r_squared(a, std::vector<double>(4, 2.5)) == 0.0);
  CHECK(r_squared(std::vector<double>{0, 1}, std::vector<double>{1, 0}) == -3.0);
  CHECK_THROWS_WITH_AS(r_squared(std::vector<double>{2, 2}, std::vector<double>{1, 3}),
                       doctest::Contains("undefined R"), MetricError);
  CHECK_THROWS_AS(r_squared(a, std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("LOOCV on an exactly linear one-feature dataset is perfect") {
  Dataset data;
  const double xs[5] = {0.1, 0.3, 0.35, 0.6, 0.9};
  for (int i = 0; i < 5; ++i) {
    TeamSeasonRow row;
    row.season = "2015-16";
    row.team = "T" + std::to_string(i);
    for (auto& v : row.features.values) v = 0.05;
    row.features[FeatureKey{Playtype::cut, Metric::fg_pct}] = xs[i];
    row.ortg = 100.0 + 20.0 * xs[i];
    data.rows.push_back(row);
  }
  const auto report = run_loocv(data, {ModelKind::linear, {}, 1}, TrainConfig{});
  CHECK(report.rmse_ortg <= 1e-9);
  CHECK(report.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("LOOCV report structure") {
  const Dataset data = small_synthetic(3, 60);
  const auto report = run_loocv(data, {ModelKind::linear, {}, 18}, TrainConfig{});
  REQUIRE(report.folds.size() == data.size());
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < report.folds.size(); ++i) {
    const auto& f = report.folds[i];
    CHECK(f.index == i);
    seen.insert(f.index);
    CHECK(f.season == data.rows[i].season);
    CHECK(f.team == data.rows[i].team);
    CHECK(f.actual == data.rows[i].ortg);
    CHECK(std::isfinite(f.predicted));
    const double range = report.target_max - report.target_min;
    CHECK(std::abs(f.normalized_actual - (f.actual - report.target_min) / range) <= 1e-10);
    CHECK(std::abs(f.normalized_predicted - (f.predicted - report.target_min) / range) <= 1e-10);
  }
  CHECK(seen.size() == data.size());

  const auto doc = nlohmann::json::parse(eval_report_json(report));
  for (const char* key : {"model_kind", "k", "fit_scope", "seed", "rmse_normalized", "rmse_ortg", "r_squared", "folds"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["folds"].size() == 60);
  CHECK(doc["model_kind"] == "linear");
  CHECK(doc["fit_scope"] == "global");
  CHECK(doc["folds"][0].contains("actual_ortg"));

  const std::string csv = predicted_vs_actual_csv(report);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "season,team,actual_ortg,predicted_ortg");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 60);
}

TEST_CASE("under global scope rmse in ORTG points is rmse_normalized times the target range") {
  const Dataset data = small_synthetic(4, 90);
  for (const auto& spec : {ModelSpec{ModelKind::linear, {}, 18}, ModelSpec{ModelKind::mlp, {3}, 18}}) {
    const auto r = run_loocv(data, spec, small_mlp_config(1));
    CHECK(std::abs(r.rmse_ortg - r.rmse_normalized * (r.target_max - r.target_min)) <= 1e-9);
  }
}

TEST_CASE("LOOCV aggregates match direct metric calls") {
  const Dataset data = small_synthetic(5, 50);
  const auto r = run_loocv(data, {ModelKind::linear, {}, 18}, TrainConfig{});
  std::vector<double> err, actual, pred;
  for (const auto& f : r.folds) {
    err.push_back(f.predicted - f.actual);
    actual.push_back(f.actual);
    pred.push_back(f.predicted);
  }
  CHECK(r.rmse_ortg == rmse(err));
  CHECK(r.r_squared == r_squared(actual, pred));
}

TEST_CASE("global LOOCV holds out the row from the model but not from the pipeline") {
  const Dataset data = small_synthetic(6, 40);
  const auto r = run_loocv(data, {ModelKind::linear, {}, 18}, TrainConfig{});
  // Fold 7 reproduced by hand: global pipeline, linear fit on the other rows.
  const auto pipe = fit_pipeline(data, 18);
  Eigen::MatrixXd x(39, 18);
  Eigen::VectorXd y(39);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i == 7) continue;
    x.row(row) = pipe.forward(data.rows[i].features).transpose();
    y[row++] = pipe.normalize_target(data.rows[i].ortg);
  }
  const auto m = fit_linear_least_squares(x, y);
  const double expected = pipe.denormalize_target(m.predict(pipe.forward(data.rows[7].features)));
  CHECK(r.folds[7].predicted == expected);
}

TEST_CASE("per-fold scope refits the pipeline on each training set") {
  const Dataset data = small_synthetic(7, 40);
  const auto g = run_loocv(data, {ModelKind::linear, {}, 18}, TrainConfig{}, FitScope::global);
  const auto p = run_loocv(data, {ModelKind::linear, {}, 18}, TrainConfig{}, FitScope::per_fold);
  CHECK(p.folds.size() == 40);
  CHECK(p.rmse_ortg != g.rmse_ortg);

  Dataset train = data;
  train.rows.erase(train.rows.begin() + 3);
  const auto pred = train_predictor(train, {ModelKind::linear, {}, 18}, TrainConfig{});
  CHECK(p.folds[3].predicted == pred.predict(data.rows[3].features));
  CHECK(fit_scope_name(FitScope::per_fold) == "per-fold");
  CHECK(parse_fit_scope("per-fold") == FitScope::per_fold);
  CHECK_THROWS_AS(parse_fit_scope("folded"), ArgumentError);
}

TEST_CASE("LOOCV is deterministic and independent of the thread count") {
  const Dataset data = small_synthetic(8, 48);
  const ModelSpec spec{ModelKind::mlp, {3}, 18};
  const auto serial = eval_report_json(run_loocv(data, spec, small_mlp_config(11), FitScope::global, 1));
  const auto again = eval_report_json(run_loocv(data, spec, small_mlp_config(11), FitScope::global, 1));
  const auto parallel = eval_report_json(run_loocv(data, spec, small_mlp_config(11), FitScope::global, 8));
  CHECK(serial == again);
  CHECK(serial == parallel);
  const auto other = eval_report_json(run_loocv(data, spec, small_mlp_config(12), FitScope::global, 1));
  CHECK(serial != other);
}

TEST_CASE("fold failures name the fold") {
  const Dataset data = small_synthetic(9, 20);
  TrainConfig cfg = small_mlp_config(1);
  cfg.learning_rate = 1e300;
  try {
    run_loocv(data, {ModelKind::mlp, {3}, 5}, cfg);
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("fold 0") != std::string::npos);
  }
}

TEST_CASE("LOOCV preconditions") {
  CHECK_THROWS_AS(run_loocv(small_synthetic(1, 2), {ModelKind::linear, {}, 1}, TrainConfig{}), ArgumentError);
  CHECK_THROWS_AS(run_loocv(small_synthetic(1, 10), {ModelKind::linear, {}, 10}, TrainConfig{}), ArgumentError);
}

TEST_CASE("architecture search") {
  const Dataset data = small_synthetic(10, 36);
  TrainConfig cfg = small_mlp_config(4);
  cfg.max_epochs = 60;

  SUBCASE("a single candidate reproduces run_loocv") {
    const auto ranking = search_mlp_architecture(data, {{3}}, 18, cfg);
    REQUIRE(ranking.size() == 1);
    CHECK(ranking[0].rmse_ortg == run_loocv(data, {ModelKind::mlp, {3}, 18}, cfg).rmse_ortg);
    CHECK(ranking[0].parameters == 18 * 3 + 3 + 3 + 1);
  }
  SUBCASE("ranking is ascending and deterministic") {
    const std::vector<std::vector<std::size_t>> shapes{{1}, {3}, {5}, {8}, {4, 2}};
    const auto a = search_mlp_architecture(data, shapes, 18, cfg);
    const auto b = search_mlp_architecture(data, shapes, 18, cfg, FitScope::global, 4);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].rmse_ortg <= a[i].rmse_ortg);
    CHECK(search_report_json(a, 18, cfg) == search_report_json(b, 18, cfg));
  }
  SUBCASE("empty candidate list") { CHECK_THROWS_AS(search_mlp_architecture(data, {}, 18, cfg), ArgumentError); }
}

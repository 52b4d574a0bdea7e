#include "cli.hpp"

#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "ortglab/common.hpp"
#include "ortglab/dataset.hpp"
#include "ortglab/error.hpp"
#include "ortglab/eval.hpp"
#include "ortglab/fetch.hpp"
#include "ortglab/model.hpp"
#include "ortglab/optimize.hpp"
#include "ortglab/service.hpp"
#include "ortglab/synthetic.hpp"

namespace ortglab::cli {

namespace {

namespace fs = std::filesystem;

struct TrainFlags {
  double learning_rate = TrainConfig{}.learning_rate;
  std::size_t epochs = TrainConfig{}.max_epochs;
  double tolerance = TrainConfig{}.plateau_tolerance;
  std::size_t patience = TrainConfig{}.plateau_patience;
  std::size_t restarts = TrainConfig{}.restarts;

  void add(CLI::App* app) {
    app->add_option("--learning-rate", learning_rate, "Adam learning rate")->capture_default_str();
    app->add_option("--epochs", epochs, "Maximum full-batch epochs per restart")->capture_default_str();
    app->add_option("--tolerance", tolerance, "Plateau tolerance on the training loss")->capture_default_str();
    app->add_option("--patience", patience, "Plateau window in epochs")->capture_default_str();
    app->add_option("--restarts", restarts, "Independent MLP initializations")->capture_default_str();
  }

  TrainConfig config(std::uint64_t seed) const {
    TrainConfig c;
    c.seed = seed;
    c.learning_rate = learning_rate;
    c.max_epochs = epochs;
    c.plateau_tolerance = tolerance;
    c.plateau_patience = patience;
    c.restarts = restarts;
    return c;
  }
};

std::vector<std::vector<std::size_t>> parse_shape_list(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    out.push_back(parse_shape(std::string_view(text).substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

fs::path sibling(const fs::path& file, const std::string& name) {
  return file.has_parent_path() ? file.parent_path() / name : fs::path(name);
}

void write_report(const fs::path& path, const std::string& json_text, const std::string& csv_text) {
  const std::string ext = path.extension().string();
  write_file_atomic(path, ext == ".csv" ? csv_text : json_text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ortg-lab: model team offensive rating from playtype profiles and optimize gameplans", "ortg-lab"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads for LOOCV folds and optimizer restarts (0 = all cores)")
      ->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic team-season dataset");
  std::uint64_t synth_seed = 0;
  std::size_t synth_n = 240;
  std::string synth_out;
  double synth_sigma = SyntheticSpec{}.noise_sigma;
  std::size_t synth_rank = SyntheticSpec{}.rule_rank;
  synth->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
  synth->add_option("-n", synth_n, "Number of rows")->capture_default_str();
  synth->add_option("-o,--output", synth_out, "Output CSV file")->required();
  synth->add_option("--sigma", synth_sigma, "Target noise std in ORTG points")->capture_default_str();
  synth->add_option("--rule-rank", synth_rank, "Project the planted rule onto this many PCA components (0 = none)")
      ->capture_default_str();

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download one season of team playtype statistics");
  std::string fetch_season;
  std::string fetch_endpoint = "https://stats.nba.com";
  std::string fetch_out;
  RetryPolicy policy;
  std::size_t backoff_ms = static_cast<std::size_t>(policy.initial_backoff.count());
  std::size_t interval_ms = static_cast<std::size_t>(policy.min_interval.count());
  std::size_t timeout_s = static_cast<std::size_t>(policy.timeout.count());
  fetch->add_option("--season", fetch_season, "Season label, e.g. 2022-23")->required();
  fetch->add_option("--endpoint", fetch_endpoint, "Base URL of the stats API")->capture_default_str();
  fetch->add_option("-o,--output", fetch_out, "Output CSV file")->required();
  fetch->add_option("--retries", policy.retries, "Retries after the first attempt")->capture_default_str();
  fetch->add_option("--backoff-ms", backoff_ms, "Initial retry backoff in milliseconds")->capture_default_str();
  fetch->add_option("--min-interval-ms", interval_ms, "Minimum spacing between requests")->capture_default_str();
  fetch->add_option("--timeout", timeout_s, "Per-request timeout in seconds")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Fit a predictor on a dataset and write a model file");
  std::string train_data, train_model_kind, train_shape = "3", train_out;
  std::size_t train_k = kDefaultComponents;
  std::uint64_t train_seed = 0;
  TrainFlags train_flags;
  train->add_option("--data", train_data, "Dataset CSV")->required();
  train->add_option("--model", train_model_kind, "Model kind")->required()->check(CLI::IsMember({"linear", "mlp"}));
  train->add_option("--shape", train_shape, "Hidden layer sizes, e.g. 3 or 4,2")->capture_default_str();
  train->add_option("--k", train_k, "PCA components")->capture_default_str();
  train->add_option("--seed", train_seed, "Random seed")->capture_default_str();
  train->add_option("-o,--output", train_out, "Output model file")->required();
  train_flags.add(train);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-out cross-validation report");
  std::string eval_data, eval_model_kind = "linear", eval_shape = "3", eval_out, eval_scope = "global", eval_from;
  std::size_t eval_k = kDefaultComponents;
  std::uint64_t eval_seed = 0;
  TrainFlags eval_flags;
  evaluate->add_option("--data", eval_data, "Dataset CSV")->required();
  evaluate->add_option("--model", eval_model_kind, "Model kind")->check(CLI::IsMember({"linear", "mlp"}))->capture_default_str();
  evaluate->add_option("--shape", eval_shape, "Hidden layer sizes, e.g. 3 or 4,2")->capture_default_str();
  evaluate->add_option("--k", eval_k, "PCA components")->capture_default_str();
  evaluate->add_option("--seed", eval_seed, "Random seed")->capture_default_str();
  evaluate->add_option("--fit-scope", eval_scope, "Normalizer/PCA fit scope")
      ->check(CLI::IsMember({"global", "per-fold"}))
      ->capture_default_str();
  evaluate->add_option("--out", eval_out, "Report JSON (predicted_vs_actual.csv is written beside it)")->required();
  evaluate->add_option("--from-model", eval_from, "Take model kind, shape, k and training settings from a model file");
  eval_flags.add(evaluate);

  // search
  auto* search = app.add_subcommand("search", "Rank MLP hidden-layer shapes by LOOCV RMSE");
  std::string search_data, search_shapes = "1;3;5;8;4,2", search_out, search_scope = "global";
  std::size_t search_k = kDefaultComponents;
  std::uint64_t search_seed = 0;
  TrainFlags search_flags;
  search->add_option("--data", search_data, "Dataset CSV")->required();
  search->add_option("--shapes", search_shapes, "Candidate shapes separated by ';'")->capture_default_str();
  search->add_option("--k", search_k, "PCA components")->capture_default_str();
  search->add_option("--seed", search_seed, "Random seed")->capture_default_str();
  search->add_option("--fit-scope", search_scope, "Normalizer/PCA fit scope")
      ->check(CLI::IsMember({"global", "per-fold"}))
      ->capture_default_str();
  search->add_option("--out", search_out, "Ranking JSON")->required();
  search_flags.add(search);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Maximize predicted ORTG over the feasible region");
  std::string opt_model, opt_data, opt_out, opt_sensitivity;
  double opt_margin = 0.0;
  std::vector<std::string> opt_locks;
  OptimizeConfig opt_cfg;
  optimize->add_option("--model", opt_model, "Model file")->required();
  optimize->add_option("--data", opt_data, "Dataset CSV (region bounds and starting points)")->required();
  optimize->add_option("--margin", opt_margin, "Widen observed bounds by this fraction of their range")
      ->capture_default_str();
  optimize->add_option("--lock", opt_locks, "Hold a feature fixed, e.g. iso_freq=0.05 (repeatable)");
  optimize->add_option("--seed", opt_cfg.seed, "Random seed")->capture_default_str();
  optimize->add_option("--out", opt_out, "Gameplan JSON")->required();
  optimize->add_option("--restarts", opt_cfg.restarts, "Starting points")->capture_default_str();
  optimize->add_option("--step", opt_cfg.step, "Initial ascent step")->capture_default_str();
  optimize->add_option("--max-iters", opt_cfg.max_iters, "Iterations per start")->capture_default_str();
  optimize->add_option("--tol", opt_cfg.tol, "Convergence tolerance on iterate movement")->capture_default_str();
  optimize->add_option("--sensitivity", opt_sensitivity, "Also write the sensitivity ranking (.csv or .json)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the prediction API and UI");
  std::string serve_model, serve_data, serve_host = "127.0.0.1", serve_origin, serve_static;
  int serve_port = 0;
  serve_cmd->add_option("--model", serve_model, "Model file")->required();
  serve_cmd->add_option("--data", serve_data, "Dataset CSV (presets and region)")->required();
  serve_cmd->add_option("--port", serve_port, "Port (else ORTG_LAB_PORT, else 8080)");
  serve_cmd->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--allow-origin", serve_origin, "Allow cross-origin requests from this origin");
  serve_cmd->add_option("--static-dir", serve_static, "Directory with the built UI assets");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    // Usage of the subcommand that failed, if one was selected.
    CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return 1;
  }

  try {
    if (synth->parsed()) {
      SyntheticSpec spec = SyntheticSpec::defaults();
      spec.noise_sigma = synth_sigma;
      spec.rule_rank = synth_rank;
      const auto result = generate_synthetic_dataset(synth_seed, synth_n, spec);
      write_file_atomic(synth_out, serialize_dataset_csv(result.data));
      out << "wrote " << result.data.size() << " rows to " << synth_out << "\n";
    } else if (fetch->parsed()) {
      policy.initial_backoff = std::chrono::milliseconds(backoff_ms);
      policy.min_interval = std::chrono::milliseconds(interval_ms);
      policy.timeout = std::chrono::seconds(timeout_s);
      const std::string csv = fetch_playtype_stats(fetch_endpoint, fetch_season, policy);
      const Dataset check = parse_dataset_csv(csv);
      write_file_atomic(fetch_out, csv);
      out << "wrote " << check.size() << " rows for " << fetch_season << " to " << fetch_out << "\n";
    } else if (train->parsed()) {
      const Dataset data = load_dataset(train_data);
      ModelSpec spec{parse_model_kind(train_model_kind), parse_shape(train_shape), train_k};
      const auto predictor = train_predictor(data, spec, train_flags.config(train_seed));
      save_model(predictor, train_out);
      out << "trained " << model_kind_name(spec.kind) << " model (final training MSE "
          << format_double(predictor.metadata().final_loss) << ") -> " << train_out << "\n";
    } else if (evaluate->parsed()) {
      const Dataset data = load_dataset(eval_data);
      ModelSpec spec{parse_model_kind(eval_model_kind), parse_shape(eval_shape), eval_k};
      TrainConfig cfg = eval_flags.config(eval_seed);
      if (!eval_from.empty()) {
        const auto model = load_model(eval_from);
        spec = {model.kind(), model.kind() == ModelKind::mlp ? model.hidden_shape() : std::vector<std::size_t>{3},
                model.pipeline().k()};
        cfg = model.metadata().train;
        if (model.metadata().dataset_fingerprint != dataset_fingerprint(data)) {
          err << "warning: " << eval_from << " was trained on a different dataset\n";
        }
      }
      const auto report = run_loocv(data, spec, cfg, parse_fit_scope(eval_scope), threads);
      const fs::path report_path(eval_out);
      const std::string json_text = eval_report_json(report);
      const std::string csv_text = predicted_vs_actual_csv(report);
      write_file_atomic(report_path, json_text);
      write_file_atomic(sibling(report_path, "predicted_vs_actual.csv"), csv_text);
      out << "LOOCV " << model_kind_name(spec.kind) << " k=" << spec.k << ": rmse_normalized "
          << format_double(report.rmse_normalized) << ", rmse_ortg " << format_double(report.rmse_ortg)
          << ", r_squared " << format_double(report.r_squared) << "\n";
    } else if (search->parsed()) {
      const Dataset data = load_dataset(search_data);
      const auto candidates = parse_shape_list(search_shapes);
      const TrainConfig cfg = search_flags.config(search_seed);
      const auto ranking = search_mlp_architecture(data, candidates, search_k, cfg, parse_fit_scope(search_scope), threads);
      write_file_atomic(search_out, search_report_json(ranking, search_k, cfg));
      for (std::size_t i = 0; i < ranking.size(); ++i) {
        out << (i + 1) << ". [" << format_shape(ranking[i].hidden) << "] rmse_ortg "
            << format_double(ranking[i].rmse_ortg) << "\n";
      }
    } else if (optimize->parsed()) {
      const auto predictor = load_model(opt_model);
      const Dataset data = load_dataset(opt_data);
      LockMap locked;
      for (const auto& text : opt_locks) {
        const auto [idx, value] = parse_lock(text);
        locked[idx] = value;
      }
      opt_cfg.threads = threads;
      const FeasibleRegion region = derive_feasible_region(data, opt_margin);
      const auto candidate = optimize_gameplan(predictor, region, locked, opt_cfg, &data);
      std::optional<std::string> sens_json, sens_csv;
      if (!opt_sensitivity.empty()) {
        const auto report = sensitivity_rank(predictor, data);
        sens_json = sensitivity_json(report);
        sens_csv = sensitivity_csv(report);
      }
      write_file_atomic(opt_out, gameplan_json(candidate));
      if (sens_json) write_report(opt_sensitivity, *sens_json, *sens_csv);
      out << "predicted ORTG " << format_double(candidate.predicted_ortg) << " -> " << opt_out << "\n";
    } else if (serve_cmd->parsed()) {
      const int port = resolve_port(serve_port);
      Service service(load_model(serve_model), load_dataset(serve_data), {serve_origin, serve_static});
      serve(service, serve_host, port);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.user_error() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ortglab::cli

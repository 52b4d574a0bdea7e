#include <charconv>
#include <cmath>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/model.hpp"

namespace ortglab {

std::string_view model_kind_name(ModelKind kind) { return kind == ModelKind::linear ? "linear" : "mlp"; }

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "mlp") return ModelKind::mlp;
  throw ArgumentError("unknown model kind '" + std::string(name) + "' (expected linear or mlp)");
}

std::vector<std::size_t> parse_shape(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const auto part = text.substr(start, end - start);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || v == 0) {
      throw ArgumentError("invalid hidden-layer shape '" + std::string(text) + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::string format_shape(const std::vector<std::size_t>& hidden) {
  std::string out;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(hidden[i]);
  }
  return out;
}

double model_output(const ModelParameters& model, const Eigen::VectorXd& coords) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return lin->predict(coords);
  const auto& mlp = std::get<MlpModel>(model);
  return mlp_forward(mlp, {coords.data(), static_cast<std::size_t>(coords.size())});
}

TrainedPredictor::TrainedPredictor(TransformPipeline pipeline, ModelParameters model, PredictorMetadata metadata)
    : pipeline_(std::move(pipeline)), model_(std::move(model)), metadata_(std::move(metadata)) {
  const auto k = static_cast<std::size_t>(pipeline_.k());
  if (const auto* lin = std::get_if<LinearModel>(&model_)) {
    if (static_cast<std::size_t>(lin->weights.size()) != k) throw ArgumentError("linear model / pipeline dimension mismatch");
  } else {
    const auto& mlp = std::get<MlpModel>(model_);
    if (mlp.layer_sizes.empty() || mlp.layer_sizes.front() != k) {
      throw ArgumentError("MLP input layer / pipeline dimension mismatch");
    }
  }
  jacobian_ = pipeline_.jacobian();
}

ModelKind TrainedPredictor::kind() const {
  return std::holds_alternative<LinearModel>(model_) ? ModelKind::linear : ModelKind::mlp;
}

std::vector<std::size_t> TrainedPredictor::hidden_shape() const {
  if (const auto* mlp = std::get_if<MlpModel>(&model_)) return mlp->hidden_shape();
  return {};
}

double TrainedPredictor::predict_normalized(const FeatureArray& x) const {
  return model_output(model_, pipeline_.forward(x));
}

double TrainedPredictor::predict(const FeatureArray& x) const {
  return pipeline_.denormalize_target(predict_normalized(x));
}

FeatureArray TrainedPredictor::gradient(const FeatureArray& x) const {
  Eigen::VectorXd dcoords;
  if (const auto* lin = std::get_if<LinearModel>(&model_)) {
    for (double v : x) {
      if (!std::isfinite(v)) throw ArgumentError("non-finite feature value");
    }
    dcoords = lin->weights;
  } else {
    const Eigen::VectorXd coords = pipeline_.forward(x);
    const auto g = mlp_input_gradient(std::get<MlpModel>(model_), {coords.data(), static_cast<std::size_t>(coords.size())});
    dcoords = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
  }
  const Eigen::VectorXd g = pipeline_.target_range() * (jacobian_.transpose() * dcoords);
  FeatureArray out{};
  for (std::size_t j = 0; j < kFeatureCount; ++j) out[j] = g[static_cast<Eigen::Index>(j)];
  return out;
}

ModelParameters fit_model(const ModelSpec& spec, const Eigen::MatrixXd& coords, const Eigen::VectorXd& targets,
                          const TrainConfig& cfg, double* final_loss) {
  if (spec.kind == ModelKind::linear) {
    LinearModel m = fit_linear_least_squares(coords, targets);
    if (final_loss) {
      double sse = 0.0;
      for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        const double r = m.predict(coords.row(i).transpose()) - targets[i];
        sse += r * r;
      }
      *final_loss = sse / static_cast<double>(coords.rows());
    }
    return m;
  }
  std::vector<std::size_t> sizes{static_cast<std::size_t>(coords.cols())};
  sizes.insert(sizes.end(), spec.hidden.begin(), spec.hidden.end());
  sizes.push_back(1);
  MlpFit fit = mlp_train(coords, targets, sizes, cfg);
  if (final_loss) *final_loss = fit.final_loss;
  return std::move(fit.model);
}

TrainedPredictor train_predictor(const Dataset& data, const ModelSpec& spec, const TrainConfig& cfg) {
  if (data.size() < 2) throw FitError("training needs at least 2 rows");
  cfg.validate();
  TransformPipeline pipeline = fit_pipeline(data, spec.k);
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(spec.k));
  Eigen::VectorXd targets(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    coords.row(ii) = pipeline.forward(data.rows[i].features).transpose();
    targets[ii] = pipeline.normalize_target(data.rows[i].ortg);
  }
  PredictorMetadata meta;
  meta.seed = cfg.seed;
  meta.restarts = spec.kind == ModelKind::mlp ? cfg.restarts : 0;
  meta.dataset_fingerprint = dataset_fingerprint(data);
  meta.created_at = iso8601_now();
  meta.train = cfg;
  ModelParameters model = fit_model(spec, coords, targets, cfg, &meta.final_loss);
  return TrainedPredictor(std::move(pipeline), std::move(model), std::move(meta));
}

}  // namespace ortglab

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ortglab/dataset.hpp"
#include "ortglab/features.hpp"
#include "ortglab/transform.hpp"

namespace ortglab {

// y = w . x + b over PCA coordinates, targets in normalized units.
struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;

  double predict(const Eigen::VectorXd& x) const;
};

// Minimum-norm least squares with an unpenalized bias: inputs and targets are
// centered, the slope comes from a complete orthogonal decomposition, and the
// bias restores the means.
LinearModel fit_linear_least_squares(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> biases;   // outputs

  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }
};

// Rectifier hidden layers, identity output.
struct MlpModel {
  std::vector<std::size_t> layer_sizes;  // e.g. {18, 3, 1}
  std::vector<DenseLayer> layers;

  static MlpModel zeros(std::vector<std::size_t> layer_sizes);
  std::vector<std::size_t> hidden_shape() const;
  std::size_t parameter_count() const;
};

double mlp_forward(const MlpModel& m, std::span<const double> x);
// d output / d input. The rectifier derivative at exactly 0 is 0.
std::vector<double> mlp_input_gradient(const MlpModel& m, std::span<const double> x);

// Parameters flattened layer by layer, weights (row-major) then biases.
std::vector<double> flatten_parameters(const MlpModel& m);
void assign_parameters(MlpModel& m, std::span<const double> params);

struct LossGradient {
  double loss = 0.0;               // mean squared error
  std::vector<double> gradient;    // same layout as flatten_parameters
};

// Full-batch loss and backpropagated parameter gradient. Rows of `inputs`
// are samples.
LossGradient mlp_loss_gradient(const MlpModel& m, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets);

struct TrainConfig {
  std::uint64_t seed = 0;
  double learning_rate = 1e-3;
  std::size_t max_epochs = 2000;
  double plateau_tolerance = 1e-6;
  std::size_t plateau_patience = 50;
  std::size_t restarts = 5;

  void validate() const;
};

struct MlpFit {
  MlpModel model;
  double final_loss = 0.0;
  std::size_t aborted_restarts = 0;
  std::vector<double> restart_losses;  // NaN for aborted restarts
  std::vector<std::size_t> restart_epochs;
};

// Full-batch Adam on mean squared error from Glorot-uniform starts. Each
// restart keeps its best-loss parameters; the best restart wins. A restart
// stops at max_epochs or when the loss improved by less than
// plateau_tolerance over the last plateau_patience epochs.
MlpFit mlp_train(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                 const std::vector<std::size_t>& layer_sizes, const TrainConfig& cfg);

enum class ModelKind { linear, mlp };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ModelSpec {
  ModelKind kind = ModelKind::linear;
  std::vector<std::size_t> hidden{3};
  std::size_t k = kDefaultComponents;
};

// Parses "3" or "4,2".
std::vector<std::size_t> parse_shape(std::string_view text);
std::string format_shape(const std::vector<std::size_t>& hidden);

struct PredictorMetadata {
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  double final_loss = 0.0;
  std::uint64_t dataset_fingerprint = 0;
  std::string created_at;
  TrainConfig train;
};

using ModelParameters = std::variant<LinearModel, MlpModel>;

// Output of `model` on PCA coordinates, in normalized target units.
double model_output(const ModelParameters& model, const Eigen::VectorXd& coords);

// Raw 48 features -> pipeline -> model -> ORTG points.
class TrainedPredictor {
 public:
  TrainedPredictor() = default;
  TrainedPredictor(TransformPipeline pipeline, ModelParameters model, PredictorMetadata metadata = {});

  ModelKind kind() const;
  const TransformPipeline& pipeline() const { return pipeline_; }
  const ModelParameters& model() const { return model_; }
  const PredictorMetadata& metadata() const { return metadata_; }
  std::vector<std::size_t> hidden_shape() const;

  double predict_normalized(const FeatureArray& x) const;
  double predict(const FeatureArray& x) const;
  double predict(const FeatureVector& x) const { return predict(x.values); }
  // d ORTG / d feature.
  FeatureArray gradient(const FeatureArray& x) const;

 private:
  TransformPipeline pipeline_;
  ModelParameters model_;
  PredictorMetadata metadata_;
  RowMatrix jacobian_;
};

// Fits a model on already-transformed inputs (normalized targets).
ModelParameters fit_model(const ModelSpec& spec, const Eigen::MatrixXd& coords,
                          const Eigen::VectorXd& targets, const TrainConfig& cfg, double* final_loss);

TrainedPredictor train_predictor(const Dataset& data, const ModelSpec& spec, const TrainConfig& cfg);

// Versioned JSON model file.
inline constexpr int kModelSchemaVersion = 1;
std::string serialize_model(const TrainedPredictor& p);
TrainedPredictor deserialize_model(std::string_view text);
void save_model(const TrainedPredictor& p, const std::filesystem::path& path);
TrainedPredictor load_model(const std::filesystem::path& path);

}  // namespace ortglab

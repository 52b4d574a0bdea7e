#include <cmath>
#include <limits>
#include <numeric>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/kernels.hpp"
#include "ortglab/model.hpp"

namespace ortglab {

MlpModel MlpModel::zeros(std::vector<std::size_t> layer_sizes) {
  if (layer_sizes.size() < 2) throw ArgumentError("MLP needs at least an input and an output layer");
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw ArgumentError("MLP layer sizes must be positive");
  }
  if (layer_sizes.back() != 1) throw ArgumentError("MLP output layer must have exactly one unit");
  MlpModel m;
  m.layer_sizes = std::move(layer_sizes);
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    DenseLayer layer;
    layer.inputs = m.layer_sizes[l];
    layer.outputs = m.layer_sizes[l + 1];
    layer.weights.assign(layer.inputs * layer.outputs, 0.0);
    layer.biases.assign(layer.outputs, 0.0);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::vector<std::size_t> MlpModel::hidden_shape() const {
  if (layer_sizes.size() < 2) return {};
  return {layer_sizes.begin() + 1, layer_sizes.end() - 1};
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.biases.size();
  return n;
}

namespace {

void check_input(const MlpModel& m, std::size_t n) {
  if (m.layers.empty()) throw ArgumentError("MLP has no layers");
  if (n != m.layers.front().inputs) {
    throw ArgumentError("MLP input dimension mismatch: expected " + std::to_string(m.layers.front().inputs) +
                        ", got " + std::to_string(n));
  }
}

// Single-sample forward pass keeping pre-activations for backprop.
std::vector<std::vector<double>> forward_trace(const MlpModel& m, std::span<const double> x) {
  check_input(m, x.size());
  const auto& k = kernels::active();
  std::vector<std::vector<double>> pre;
  std::vector<double> act(x.begin(), x.end());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    std::vector<double> z(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      z[o] = k.dot(layer.weights.data() + o * layer.inputs, act.data(), layer.inputs) + layer.biases[o];
    }
    pre.push_back(z);
    act.resize(z.size());
    if (l + 1 < m.layers.size()) {
      k.relu(z.data(), act.data(), z.size());
    } else {
      act = z;
    }
  }
  return pre;
}

}  // namespace

double mlp_forward(const MlpModel& m, std::span<const double> x) { return forward_trace(m, x).back()[0]; }

std::vector<double> mlp_input_gradient(const MlpModel& m, std::span<const double> x) {
  const auto pre = forward_trace(m, x);
  std::vector<double> upstream{1.0};  // d out / d z of the output layer
  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const auto& layer = m.layers[l];
    std::vector<double> down(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      kernels::axpy(upstream[o], {layer.weights.data() + o * layer.inputs, layer.inputs}, down);
    }
    if (l > 0) {
      const auto& z = pre[l - 1];
      for (std::size_t i = 0; i < down.size(); ++i) down[i] = z[i] > 0.0 ? down[i] : 0.0;
    }
    upstream = std::move(down);
  }
  return upstream;
}

std::vector<double> flatten_parameters(const MlpModel& m) {
  std::vector<double> out;
  out.reserve(m.parameter_count());
  for (const auto& l : m.layers) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.biases.begin(), l.biases.end());
  }
  return out;
}

void assign_parameters(MlpModel& m, std::span<const double> params) {
  if (params.size() != m.parameter_count()) throw ArgumentError("MLP parameter count mismatch");
  std::size_t pos = 0;
  for (auto& l : m.layers) {
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), l.weights.size(), l.weights.begin());
    pos += l.weights.size();
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), l.biases.size(), l.biases.begin());
    pos += l.biases.size();
  }
}

namespace {

// Batch buffers in unit-major layout: every unit owns a contiguous row of
// length n (one entry per sample), so the inner loops are axpy/dot over
// samples and vectorize cleanly.
class BatchTrainer {
 public:
  BatchTrainer(const MlpModel& shape, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets)
      : n_(static_cast<std::size_t>(inputs.rows())), targets_(targets.data(), targets.data() + targets.size()) {
    const std::size_t d = static_cast<std::size_t>(inputs.cols());
    input_.resize(d * n_);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t s = 0; s < n_; ++s) {
        input_[i * n_ + s] = inputs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i));
      }
    }
    for (const auto& layer : shape.layers) {
      pre_.emplace_back(layer.outputs * n_);
      act_.emplace_back(layer.outputs * n_);
      grad_.emplace_back(layer.outputs * n_);
    }
    residual_.resize(n_);
    scratch_.resize(n_);
  }

  // Returns the loss; fills `gradient` in flatten_parameters layout.
  double evaluate(const MlpModel& m, std::vector<double>& gradient) {
    const auto& k = kernels::active();
    const std::size_t layers = m.layers.size();
    for (std::size_t l = 0; l < layers; ++l) {
      const auto& layer = m.layers[l];
      const double* prev = l == 0 ? input_.data() : act_[l - 1].data();
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        double* z = pre_[l].data() + o * n_;
        std::fill(z, z + n_, layer.biases[o]);
        for (std::size_t i = 0; i < layer.inputs; ++i) {
          k.axpy(layer.weights[o * layer.inputs + i], prev + i * n_, z, n_);
        }
      }
      if (l + 1 < layers) {
        k.relu(pre_[l].data(), act_[l].data(), layer.outputs * n_);
      }
    }
    k.sub(pre_.back().data(), targets_.data(), residual_.data(), n_);
    const double inv_n = 1.0 / static_cast<double>(n_);
    const double loss = k.dot(residual_.data(), residual_.data(), n_) * inv_n;

    gradient.resize(m.parameter_count());
    // dL/dz for the output layer.
    double* g_out = grad_.back().data();
    std::fill(g_out, g_out + n_, 0.0);
    k.axpy(2.0 * inv_n, residual_.data(), g_out, n_);

    std::size_t offset = gradient.size();
    for (std::size_t l = layers; l-- > 0;) {
      const auto& layer = m.layers[l];
      offset -= layer.weights.size() + layer.biases.size();
      const double* prev = l == 0 ? input_.data() : act_[l - 1].data();
      const double* g = grad_[l].data();
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        for (std::size_t i = 0; i < layer.inputs; ++i) {
          gradient[offset + o * layer.inputs + i] = k.dot(g + o * n_, prev + i * n_, n_);
        }
        gradient[offset + layer.weights.size() + o] = k.sum(g + o * n_, n_);
      }
      if (l == 0) break;
      double* g_prev = grad_[l - 1].data();
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        std::fill(scratch_.begin(), scratch_.end(), 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
          k.axpy(layer.weights[o * layer.inputs + i], g + o * n_, scratch_.data(), n_);
        }
        k.relu_backward(pre_[l - 1].data() + i * n_, scratch_.data(), g_prev + i * n_, n_);
      }
    }
    return loss;
  }

 private:
  std::size_t n_;
  std::vector<double> targets_;
  std::vector<double> input_;
  std::vector<std::vector<double>> pre_;
  std::vector<std::vector<double>> act_;
  std::vector<std::vector<double>> grad_;
  std::vector<double> residual_;
  std::vector<double> scratch_;
};

void check_training_data(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                         const std::vector<std::size_t>& layer_sizes) {
  if (inputs.rows() < 2) throw FitError("MLP training needs at least 2 samples");
  if (inputs.rows() != targets.size()) throw FitError("input/target count mismatch");
  if (layer_sizes.empty() || layer_sizes.front() != static_cast<std::size_t>(inputs.cols())) {
    throw FitError("MLP input layer must match the input dimension");
  }
  if (layer_sizes.back() != 1) throw FitError("MLP output layer must have one unit");
}

void glorot_init(MlpModel& m, Rng& rng) {
  for (auto& layer : m.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = rng.uniform(-limit, limit);
    std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
  }
}

struct RestartResult {
  std::vector<double> params;
  double loss = std::numeric_limits<double>::quiet_NaN();
  std::size_t epochs = 0;
  bool aborted = false;
};

RestartResult run_restart(MlpModel model, BatchTrainer& trainer, const TrainConfig& cfg) {
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;

  std::vector<double> params = flatten_parameters(model);
  std::vector<double> grad;
  std::vector<double> m1(params.size(), 0.0);
  std::vector<double> m2(params.size(), 0.0);
  std::vector<double> history;
  history.reserve(cfg.max_epochs);

  RestartResult best;
  best.loss = std::numeric_limits<double>::infinity();
  double b1t = 1.0;
  double b2t = 1.0;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    assign_parameters(model, params);
    const double loss = trainer.evaluate(model, grad);
    if (!std::isfinite(loss)) {
      RestartResult aborted;
      aborted.aborted = true;
      aborted.epochs = epoch;
      return aborted;
    }
    history.push_back(loss);
    best.epochs = epoch + 1;
    if (loss < best.loss) {
      best.loss = loss;
      best.params = params;
    }
    if (epoch >= cfg.plateau_patience &&
        history[epoch - cfg.plateau_patience] - loss < cfg.plateau_tolerance) {
      break;
    }
    b1t *= beta1;
    b2t *= beta2;
    for (std::size_t i = 0; i < params.size(); ++i) {
      m1[i] = beta1 * m1[i] + (1.0 - beta1) * grad[i];
      m2[i] = beta2 * m2[i] + (1.0 - beta2) * grad[i] * grad[i];
      const double mhat = m1[i] / (1.0 - b1t);
      const double vhat = m2[i] / (1.0 - b2t);
      params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + eps);
    }
  }
  return best;
}

}  // namespace

LossGradient mlp_loss_gradient(const MlpModel& m, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets) {
  check_training_data(inputs, targets, m.layer_sizes);
  BatchTrainer trainer(m, inputs, targets);
  LossGradient out;
  out.loss = trainer.evaluate(m, out.gradient);
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ArgumentError("learning rate must be positive");
  if (max_epochs == 0) throw ArgumentError("max epochs must be positive");
  if (!(plateau_tolerance > 0.0)) throw ArgumentError("plateau tolerance must be positive");
  if (plateau_patience == 0) throw ArgumentError("plateau patience must be positive");
  if (restarts == 0) throw ArgumentError("restarts must be positive");
}

MlpFit mlp_train(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                 const std::vector<std::size_t>& layer_sizes, const TrainConfig& cfg) {
  cfg.validate();
  check_training_data(inputs, targets, layer_sizes);
  MlpModel shape = MlpModel::zeros(layer_sizes);
  BatchTrainer trainer(shape, inputs, targets);

  MlpFit fit;
  fit.model = shape;
  fit.final_loss = std::numeric_limits<double>::infinity();
  bool any = false;
  const std::uint64_t base = splitmix64(cfg.seed);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(base, r));
    MlpModel start = shape;
    glorot_init(start, rng);
    RestartResult result = run_restart(std::move(start), trainer, cfg);
    fit.restart_losses.push_back(result.loss);
    fit.restart_epochs.push_back(result.epochs);
    if (result.aborted) {
      ++fit.aborted_restarts;
      continue;
    }
    if (!any || result.loss < fit.final_loss) {
      any = true;
      fit.final_loss = result.loss;
      assign_parameters(fit.model, result.params);
    }
  }
  if (!any) throw FitError("MLP training failed: every restart produced a non-finite loss");
  return fit;
}

}  // namespace ortglab

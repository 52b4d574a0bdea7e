#include <cmath>
#include <string>

#include <json.hpp>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/model.hpp"

namespace ortglab {

using nlohmann::json;

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json vec_json(const std::vector<double>& v) { return json(v); }

double number(const json& j, const char* what) {
  if (!j.is_number()) throw LoadError(std::string("model file: corrupted numeric value in ") + what);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw LoadError(std::string("model file: non-finite value in ") + what);
  return v;
}

std::vector<double> numbers(const json& j, const char* what, std::size_t expected) {
  if (!j.is_array()) throw LoadError(std::string("model file: ") + what + " must be an array");
  if (expected != 0 && j.size() != expected) {
    throw LoadError(std::string("model file: ") + what + " has " + std::to_string(j.size()) + " entries, expected " +
                    std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(number(e, what));
  return out;
}

Eigen::VectorXd eigen_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) throw LoadError(std::string("model file: missing field '") + name + "'");
  return obj.at(name);
}

json train_json(const TrainConfig& cfg) {
  return {{"seed", cfg.seed},
          {"learning_rate", cfg.learning_rate},
          {"max_epochs", cfg.max_epochs},
          {"plateau_tolerance", cfg.plateau_tolerance},
          {"plateau_patience", cfg.plateau_patience},
          {"restarts", cfg.restarts}};
}

}  // namespace

std::string serialize_model(const TrainedPredictor& p) {
  const auto& pl = p.pipeline();
  json components = json::array();
  for (Eigen::Index r = 0; r < pl.pca.components.rows(); ++r) {
    components.push_back(vec_json(Eigen::VectorXd(pl.pca.components.row(r).transpose())));
  }
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["pipeline"] = {
      {"order", {"minmax", "pca"}},
      {"feature_normalizer", {{"min", vec_json(pl.feature_normalizer.min())}, {"max", vec_json(pl.feature_normalizer.max())}}},
      {"target_normalizer", {{"min", vec_json(pl.target_normalizer.min())}, {"max", vec_json(pl.target_normalizer.max())}}},
      {"pca",
       {{"mean", vec_json(pl.pca.mean)},
        {"scale", vec_json(pl.pca.scale)},
        {"components", components},
        {"explained_variance", vec_json(pl.pca.explained_variance)},
        {"unit_scaled", pl.pca.unit_scaled}}}};
  doc["model_kind"] = model_kind_name(p.kind());
  if (const auto* lin = std::get_if<LinearModel>(&p.model())) {
    doc["parameters"] = {{"weights", vec_json(lin->weights)}, {"bias", lin->bias}};
  } else {
    const auto& mlp = std::get<MlpModel>(p.model());
    json layers = json::array();
    for (const auto& layer : mlp.layers) {
      json rows = json::array();
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        rows.push_back(std::vector<double>(layer.weights.begin() + static_cast<std::ptrdiff_t>(o * layer.inputs),
                                           layer.weights.begin() + static_cast<std::ptrdiff_t>((o + 1) * layer.inputs)));
      }
      layers.push_back({{"weights", rows}, {"biases", layer.biases}});
    }
    doc["parameters"] = {{"layer_sizes", mlp.layer_sizes}, {"layers", layers}};
  }
  const auto& meta = p.metadata();
  doc["metadata"] = {{"seed", meta.seed},
                     {"restarts", meta.restarts},
                     {"final_loss", meta.final_loss},
                     {"dataset_fingerprint", hex64(meta.dataset_fingerprint)},
                     {"created_at", meta.created_at},
                     {"k", pl.k()},
                     {"hidden_shape", p.hidden_shape()},
                     {"train", train_json(meta.train)}};
  return doc.dump(2) + "\n";
}

TrainedPredictor deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("model file: parse error: ") + e.what());
  }
  try {
    const auto& version = field(doc, "schema_version");
    if (!version.is_number_integer() || version.get<long long>() != kModelSchemaVersion) {
      throw LoadError("model file: schema version " + version.dump() + " is not supported (expected " +
                      std::to_string(kModelSchemaVersion) + ")");
    }
    const auto& pj = field(doc, "pipeline");
    const auto& order = field(pj, "order");
    if (order != json({"minmax", "pca"})) throw LoadError("model file: unsupported pipeline order " + order.dump());

    TransformPipeline pl;
    const auto& fn = field(pj, "feature_normalizer");
    pl.feature_normalizer = MinMaxNormalizer(numbers(field(fn, "min"), "feature_normalizer.min", kFeatureCount),
                                             numbers(field(fn, "max"), "feature_normalizer.max", kFeatureCount));
    const auto& tn = field(pj, "target_normalizer");
    pl.target_normalizer =
        MinMaxNormalizer(numbers(field(tn, "min"), "target_normalizer.min", 1), numbers(field(tn, "max"), "target_normalizer.max", 1));

    const auto& pca = field(pj, "pca");
    pl.pca.mean = eigen_vec(numbers(field(pca, "mean"), "pca.mean", kFeatureCount));
    pl.pca.scale = eigen_vec(numbers(field(pca, "scale"), "pca.scale", kFeatureCount));
    for (Eigen::Index j = 0; j < pl.pca.scale.size(); ++j) {
      if (!(pl.pca.scale[j] > 0.0)) throw LoadError("model file: pca.scale must be positive");
    }
    const auto& comps = field(pca, "components");
    if (!comps.is_array() || comps.empty() || comps.size() > kFeatureCount) {
      throw LoadError("model file: pca.components must hold 1..48 rows");
    }
    pl.pca.components.resize(static_cast<Eigen::Index>(comps.size()), static_cast<Eigen::Index>(kFeatureCount));
    for (std::size_t r = 0; r < comps.size(); ++r) {
      const auto row = numbers(comps[r], "pca.components", kFeatureCount);
      for (std::size_t c = 0; c < kFeatureCount; ++c) {
        pl.pca.components(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
      }
    }
    pl.pca.explained_variance = eigen_vec(numbers(field(pca, "explained_variance"), "pca.explained_variance", comps.size()));
    if (pca.contains("unit_scaled")) pl.pca.unit_scaled = pca.at("unit_scaled").get<std::vector<std::size_t>>();

    const ModelKind kind = parse_model_kind(field(doc, "model_kind").get<std::string>());
    const auto& params = field(doc, "parameters");
    ModelParameters model;
    if (kind == ModelKind::linear) {
      LinearModel lin;
      lin.weights = eigen_vec(numbers(field(params, "weights"), "parameters.weights", comps.size()));
      lin.bias = number(field(params, "bias"), "parameters.bias");
      model = std::move(lin);
    } else {
      auto sizes = field(params, "layer_sizes").get<std::vector<std::size_t>>();
      MlpModel mlp = MlpModel::zeros(sizes);
      const auto& layers = field(params, "layers");
      if (!layers.is_array() || layers.size() != mlp.layers.size()) throw LoadError("model file: layer count mismatch");
      for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        auto& layer = mlp.layers[l];
        const auto& rows = field(layers[l], "weights");
        if (!rows.is_array() || rows.size() != layer.outputs) throw LoadError("model file: layer weight rows mismatch");
        for (std::size_t o = 0; o < layer.outputs; ++o) {
          const auto row = numbers(rows[o], "parameters.layers.weights", layer.inputs);
          std::copy(row.begin(), row.end(), layer.weights.begin() + static_cast<std::ptrdiff_t>(o * layer.inputs));
        }
        layer.biases = numbers(field(layers[l], "biases"), "parameters.layers.biases", layer.outputs);
      }
      model = std::move(mlp);
    }

    PredictorMetadata meta;
    const auto& mj = field(doc, "metadata");
    meta.seed = field(mj, "seed").get<std::uint64_t>();
    meta.restarts = field(mj, "restarts").get<std::size_t>();
    meta.final_loss = field(mj, "final_loss").is_number() ? field(mj, "final_loss").get<double>() : 0.0;
    meta.dataset_fingerprint = std::stoull(field(mj, "dataset_fingerprint").get<std::string>(), nullptr, 16);
    meta.created_at = field(mj, "created_at").get<std::string>();
    if (mj.contains("train")) {
      const auto& t = mj.at("train");
      meta.train.seed = field(t, "seed").get<std::uint64_t>();
      meta.train.learning_rate = number(field(t, "learning_rate"), "train.learning_rate");
      meta.train.max_epochs = field(t, "max_epochs").get<std::size_t>();
      meta.train.plateau_tolerance = number(field(t, "plateau_tolerance"), "train.plateau_tolerance");
      meta.train.plateau_patience = field(t, "plateau_patience").get<std::size_t>();
      meta.train.restarts = field(t, "restarts").get<std::size_t>();
    }
    return TrainedPredictor(std::move(pl), std::move(model), std::move(meta));
  } catch (const LoadError&) {
    throw;
  } catch (const json::exception& e) {
    throw LoadError(std::string("model file: ") + e.what());
  } catch (const Error& e) {
    throw LoadError(std::string("model file: ") + e.what());
  } catch (const std::logic_error& e) {
    throw LoadError(std::string("model file: ") + e.what());
  }
}

void save_model(const TrainedPredictor& p, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(p));
}

TrainedPredictor load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ArgumentError("model file not found: " + path.string());
  return deserialize_model(read_file(path));
}

}  // namespace ortglab

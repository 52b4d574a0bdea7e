#include "ortglab/service.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <httplib.h>
#include <json.hpp>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"

namespace ortglab {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

ApiResponse api_error(int status, std::string_view code, const std::string& message, const std::string& field = {}) {
  ojson body{{"status", status}, {"code", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  return {status, body.dump()};
}

ApiResponse ok(std::string body) { return {200, std::move(body)}; }

ojson feature_object(const FeatureArray& x) {
  ojson out = ojson::object();
  const auto& names = feature_names();
  for (std::size_t j = 0; j < kFeatureCount; ++j) out[names[j]] = x[j];
  return out;
}

struct BadRequest {
  ApiResponse response;
};

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw BadRequest{api_error(400, "malformed_json", std::string("request body is not valid JSON: ") + e.what())};
  }
}

double number_field(const json& v, const std::string& name) {
  if (!v.is_number()) throw BadRequest{api_error(400, "not_a_number", name + " must be a finite number", name)};
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw BadRequest{api_error(400, "not_a_number", name + " must be a finite number", name)};
  return x;
}

}  // namespace

Service::Service(TrainedPredictor predictor, Dataset data, ServiceOptions options)
    : predictor_(std::move(predictor)), data_(std::move(data)), options_(std::move(options)) {
  if (data_.empty()) throw ArgumentError("service needs a nonempty dataset");
  region_ = derive_feasible_region(data_, 0.0);

  const auto& meta = predictor_.metadata();
  ojson region{{"lower", feature_object(region_.lower)},
               {"upper", feature_object(region_.upper)},
               {"freq_sum_cap", region_.freq_sum_cap}};
  ojson model{{"model_kind", model_kind_name(predictor_.kind())},
              {"hidden_shape", predictor_.hidden_shape()},
              {"k", predictor_.pipeline().k()},
              {"dataset_fingerprint", hex64(meta.dataset_fingerprint)},
              {"final_loss", meta.final_loss},
              {"seed", meta.seed},
              {"restarts", meta.restarts},
              {"created_at", meta.created_at},
              {"feature_names", feature_names()},
              {"region", region}};
  model_body_ = model.dump();

  sensitivity_body_ = sensitivity_json(sensitivity_rank(predictor_, data_));

  ojson presets = ojson::array();
  for (const auto& row : data_.rows) {
    presets.push_back({{"season", row.season},
                       {"team", row.team},
                       {"ortg", row.ortg},
                       {"features", feature_object(row.features.values)}});
  }
  presets_body_ = presets.dump();
}

ApiResponse Service::health() const { return ok(R"({"status":"ok"})"); }
ApiResponse Service::model_info() const { return ok(model_body_); }
ApiResponse Service::sensitivity() const { return ok(sensitivity_body_); }
ApiResponse Service::presets() const { return ok(presets_body_); }

ApiResponse Service::predict(std::string_view body) const {
  try {
    const json req = parse_body(body);
    if (!req.is_object()) return api_error(400, "malformed_json", "request body must be a JSON object");
    for (const auto& [key, value] : req.items()) {
      if (!feature_index(key)) return api_error(400, "unknown_feature", "unknown feature '" + key + "'", key);
    }
    const auto& names = feature_names();
    FeatureArray x{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (!req.contains(names[j])) {
        return api_error(400, "missing_feature", "missing feature '" + names[j] + "'", names[j]);
      }
      x[j] = number_field(req.at(names[j]), names[j]);
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (x[j] < 0.0 || x[j] > 1.0) {
        return api_error(422, "out_of_unit_interval", names[j] + " must lie in [0,1]", names[j]);
      }
    }
    std::vector<std::string> out_of_region;
    double freq_sum = 0.0;
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (x[j] < region_.lower[j] || x[j] > region_.upper[j]) out_of_region.push_back(names[j]);
    }
    for (Playtype p : kPlaytypes) freq_sum += x[freq_index(p)];
    if (freq_sum > region_.freq_sum_cap) out_of_region.push_back("freq_sum");

    ojson resp{{"ortg", predictor_.predict(x)},
               {"normalized", predictor_.predict_normalized(x)},
               {"out_of_region", out_of_region}};
    return ok(resp.dump());
  } catch (const BadRequest& bad) {
    return bad.response;
  }
}

ApiResponse Service::optimize(std::string_view body) const {
  try {
    const json req = body.empty() ? json::object() : parse_body(body);
    if (!req.is_object()) return api_error(400, "malformed_json", "request body must be a JSON object");
    LockMap locked;
    double margin = 0.0;
    OptimizeConfig cfg;
    for (const auto& [key, value] : req.items()) {
      if (key == "locked") {
        if (!value.is_object()) return api_error(400, "malformed_json", "locked must be an object", "locked");
        for (const auto& [name, v] : value.items()) {
          const auto idx = feature_index(name);
          if (!idx) return api_error(400, "unknown_feature", "unknown feature '" + name + "' in locked", name);
          locked[*idx] = number_field(v, name);
        }
      } else if (key == "margin") {
        margin = number_field(value, "margin");
        if (margin < 0.0) return api_error(422, "invalid_margin", "margin must be nonnegative", "margin");
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) {
          return api_error(400, "not_a_number", "seed must be a nonnegative integer", "seed");
        }
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "restarts") {
        if (!value.is_number_unsigned() || value.get<std::size_t>() == 0 || value.get<std::size_t>() > 256) {
          return api_error(400, "not_a_number", "restarts must be an integer in [1,256]", "restarts");
        }
        cfg.restarts = value.get<std::size_t>();
      } else {
        return api_error(400, "unknown_field", "unknown field '" + key + "'", key);
      }
    }
    const FeasibleRegion region = margin == 0.0 ? region_ : derive_feasible_region(data_, margin);
    try {
      const auto candidate = optimize_gameplan(predictor_, region, locked, cfg, &data_);
      return ok(gameplan_json(candidate));
    } catch (const LockConflict& e) {
      return api_error(422, "locked_conflict", e.what(), e.field());
    }
  } catch (const BadRequest& bad) {
    return bad.response;
  }
}

void Service::mount(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/api/health", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
  server.Get("/api/model", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, model_info()); });
  server.Get("/api/sensitivity",
             [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, sensitivity()); });
  server.Get("/api/presets", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, presets()); });
  server.Post("/api/predict",
              [this, reply](const httplib::Request& req, httplib::Response& res) { reply(res, predict(req.body)); });
  server.Post("/api/optimize",
              [this, reply](const httplib::Request& req, httplib::Response& res) { reply(res, optimize(req.body)); });

  if (!options_.static_dir.empty() && std::filesystem::is_directory(options_.static_dir)) {
    server.set_mount_point("/", options_.static_dir.string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "<!doctype html><html><head><meta charset=\"utf-8\"><title>ortg-lab</title></head>"
          "<body><h1>ortg-lab</h1><p>The gameplan explorer UI is not installed. Start the server with "
          "<code>--static-dir</code> pointing at the built UI, or use the JSON API under <code>/api/</code>.</p>"
          "</body></html>",
          "text/html");
    });
  }

  if (!options_.allow_origin.empty()) {
    const std::string origin = options_.allow_origin;
    server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    });
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
  }

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const auto err = api_error(res.status, res.status == 404 ? "not_found" : "http_error",
                               "no handler for " + req.method + " " + req.path);
    res.set_content(err.body, err.content_type);
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    const auto err = api_error(500, "internal", message);
    res.status = 500;
    res.set_content(err.body, err.content_type);
  });
}

int resolve_port(int flag_port) {
  if (flag_port > 0) return flag_port;
  if (const char* env = std::getenv("ORTG_LAB_PORT")) {
    int port = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), port);
    if (ec != std::errc{} || ptr != text.data() + text.size() || port <= 0 || port > 65535) {
      throw ArgumentError("ORTG_LAB_PORT must be a port number, got '" + std::string(text) + "'");
    }
    return port;
  }
  return 8080;
}

void serve(const Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  if (!server.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  std::cerr << "ortg-lab serving on http://" << host << ":" << port << "\n";
  server.listen_after_bind();
}

}  // namespace ortglab

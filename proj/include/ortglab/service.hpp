#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ortglab/dataset.hpp"
#include "ortglab/model.hpp"
#include "ortglab/optimize.hpp"

namespace httplib {
class Server;
}

namespace ortglab {

struct ServiceOptions {
  std::string allow_origin;             // empty: same-origin only
  std::filesystem::path static_dir;     // UI assets; empty serves a placeholder page
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Read-only prediction API. Model, dataset, region and the sensitivity
// report are fixed at construction and shared by all request handlers.
class Service {
 public:
  Service(TrainedPredictor predictor, Dataset data, ServiceOptions options = {});

  ApiResponse health() const;
  ApiResponse model_info() const;
  ApiResponse predict(std::string_view body) const;
  ApiResponse optimize(std::string_view body) const;
  ApiResponse sensitivity() const;
  ApiResponse presets() const;

  // Registers every route, CORS handling and the static UI on `server`.
  void mount(httplib::Server& server) const;

  const TrainedPredictor& predictor() const { return predictor_; }
  const FeasibleRegion& region() const { return region_; }

 private:
  TrainedPredictor predictor_;
  Dataset data_;
  ServiceOptions options_;
  FeasibleRegion region_;
  std::string model_body_;
  std::string sensitivity_body_;
  std::string presets_body_;
};

// Port resolution: explicit flag, then ORTG_LAB_PORT, then 8080.
int resolve_port(int flag_port);

// Blocks until the server stops.
void serve(const Service& service, const std::string& host, int port);

}  // namespace ortglab

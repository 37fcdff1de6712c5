#include "server.hpp"

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"
#include "wristmood/eval.hpp"
#include "wristmood/ingest.hpp"
#include "wristmood/pipeline.hpp"
#include "wristmood/svm.hpp"

namespace wristmood::tools {

namespace {

constexpr const char* kFields[] = {"scheduled_at", "answered_at", "happiness", "activeness"};

std::string error_body(const std::string& message, const std::string& field = {}) {
  nlohmann::ordered_json j;
  j["error"] = message;
  if (!field.empty()) j["field"] = field;
  return j.dump();
}

std::string field_of(const std::string& message) {
  for (const char* f : kFields)
    if (message.rfind(f, 0) == 0) return f;
  return {};
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

struct EmaServer::Impl {
  ServerOptions options;
  httplib::Server http;
  std::mutex log_mutex;
  std::set<std::int64_t> answered;
  std::size_t entries = 0;
  std::optional<svm::SvmModel> model;

  void append(httplib::Response& res, const std::string& body) {
    EmaEntry e;
    try {
      e = parse_ema_record(body);
    } catch (const Error& err) {
      const std::string& msg = err.detail();
      if (err.code() == ErrorCode::kLikertOutOfRange) {
        res.status = 422;
        res.set_content(error_body(msg, field_of(msg)), "application/json");
      } else if (err.code() == ErrorCode::kMissingField) {
        res.status = 400;
        res.set_content(error_body("missing field " + msg, msg), "application/json");
      } else {
        res.status = 400;
        res.set_content(error_body(msg, field_of(msg)), "application/json");
      }
      spdlog::info("event=ema_rejected status={} reason=\"{}\"", res.status, msg);
      return;
    }
    std::lock_guard lock(log_mutex);
    if (answered.contains(e.answered_at)) {
      res.status = 409;
      res.set_content(error_body("duplicate answered_at", "answered_at"), "application/json");
      spdlog::info("event=ema_duplicate answered_at={}", e.answered_at);
      return;
    }
    const std::string line = format_ema_record(e) + "\n";
    std::ofstream out(options.ema_log, std::ios::binary | std::ios::app);
    out << line;
    out.flush();
    if (!out) {
      res.status = 500;
      res.set_content(error_body("cannot append to the EMA log"), "application/json");
      spdlog::error("event=ema_write_failed path={}", options.ema_log.string());
      return;
    }
    answered.insert(e.answered_at);
    ++entries;
    res.status = 201;
    res.set_content(format_ema_record(e), "application/json");
    spdlog::info("event=ema_stored answered_at={} happiness={} activeness={}", e.answered_at,
                 e.happiness, e.activeness);
  }

  void predict(httplib::Response& res) {
    if (!model || !options.features) {
      res.status = 404;
      res.set_content(error_body("prediction not configured"), "application/json");
      return;
    }
    std::vector<FeatureWindow> windows;
    try {
      windows = read_feature_table(*options.features);
    } catch (const Error& err) {
      res.status = 503;
      res.set_content(error_body(err.what()), "application/json");
      return;
    }
    if (windows.empty()) {
      res.status = 503;
      res.set_content(error_body("no feature windows yet"), "application/json");
      return;
    }
    const auto& w = windows.back();
    const int label = model->predict(w.values);
    const auto target = target_from_string(model->target).value_or(Target::kMood);
    nlohmann::ordered_json j;
    j["window_start"] = w.start;
    j["window_end"] = w.end;
    j["target"] = std::string(to_string(target));
    j["label"] = class_name(target, label);
    res.set_content(j.dump(), "application/json");
  }
};

EmaServer::EmaServer(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  auto& o = impl_->options;
  if (std::filesystem::exists(o.ema_log)) {
    for (const auto& e : parse_ema_log(o.ema_log)) impl_->answered.insert(e.answered_at);
    impl_->entries = impl_->answered.size();
  } else {
    std::ofstream touch(o.ema_log, std::ios::binary | std::ios::app);
    if (!touch) fail(ErrorCode::kIo, "cannot create " + o.ema_log.string());
  }
  if (o.model) impl_->model = svm::load_model(o.model->string());

  auto& http = impl_->http;
  Impl* self = impl_.get();
  http.Post("/ema", [self](const httplib::Request& req, httplib::Response& res) {
    self->append(res, req.body);
  });
  http.Get("/ema", [self](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(self->log_mutex);
    res.set_content(read_all(self->options.ema_log), "application/x-ndjson");
  });
  http.Get("/health", [self](const httplib::Request&, httplib::Response& res) {
    std::size_t n;
    {
      std::lock_guard lock(self->log_mutex);
      n = self->entries;
    }
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["entries"] = n;
    j["prediction"] = self->model.has_value() && self->options.features.has_value();
    res.set_content(j.dump(), "application/json");
  });
  http.Get("/prediction", [self](const httplib::Request&, httplib::Response& res) {
    self->predict(res);
  });
  if (o.static_dir && !http.set_mount_point("/", o.static_dir->string()))
    fail(ErrorCode::kIo, "cannot serve static files from " + o.static_dir->string());
}

EmaServer::~EmaServer() { stop(); }

int EmaServer::bind() {
  auto& o = impl_->options;
  int port = o.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(o.host);
  } else if (!impl_->http.bind_to_port(o.host, port)) {
    port = -1;
  }
  if (port < 0) fail(ErrorCode::kIo, "cannot bind " + o.host + ":" + std::to_string(o.port));
  return port;
}

void EmaServer::listen() { impl_->http.listen_after_bind(); }

void EmaServer::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace wristmood::tools

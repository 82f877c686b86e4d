#include "spider/http_server.hpp"

#include <httplib.h>

namespace spider {

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";
constexpr const char* kText = "text/plain; charset=utf-8";

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const nlohmann::json& detail = nullptr) {
  nlohmann::json body{{"error", message}};
  if (detail.is_object()) body.update(detail);
  send_json(res, status, body);
}

// Runs `fn`, translating failures into JSON error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    send_error(res, e.status(), e.what(), e.detail());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, std::string("malformed JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    send_error(res, 400, e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

std::string required_string(const nlohmann::json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body[key].is_string()) {
    throw ServiceError(400, std::string("missing string field '") + key + "'");
  }
  return body[key].get<std::string>();
}

}  // namespace

HttpServer::HttpServer(SessionService& service, std::optional<std::filesystem::path> ui_dir)
    : service_(service), ui_dir_(std::move(ui_dir)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void HttpServer::routes() {
  auto& s = *server_;

  s.Post("/schemas", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = service_.create_schema(req.body);
      send_json(res, 201, {{"id", id}});
    });
  });

  s.Get("/schemas", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, {{"schemas", service_.schema_ids()}}); });
  });

  s.Get(R"(/schemas/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.set_content(service_.schema_text(req.matches[1]), kText);
      res.status = 200;
    });
  });

  s.Get(R"(/schemas/([A-Za-z0-9_-]+)/graph)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.schema_graph(req.matches[1])); });
  });

  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = nlohmann::json::parse(req.body);
      send_json(res, 201,
                service_.create_session(required_string(body, "schema_id"), required_string(body, "root_type")));
    });
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.get_session(req.matches[1])); });
  });

  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/ops)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      const auto body = nlohmann::json::parse(req.body);
      const std::string op = required_string(body, "op");
      const std::string node = required_string(body, "node");
      auto kind = parse_op_kind(op);
      if (!kind) throw ServiceError(400, "unknown op '" + op + "'");
      auto id_node = NodeId::parse(node);
      // Check existence first so an unknown session is a 404 even with a bad node id.
      (void)service_.session(id);
      if (!id_node) throw ServiceError(409, "unknown node " + node);
      send_json(res, 200, service_.mutate_session(id, {*kind, *id_node}));
    });
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+)/expression)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string fmt = req.has_param("format") ? req.get_param_value("format") : "expr";
      auto format = parse_emit_format(fmt);
      if (!format || *format == EmitFormat::Json) throw ServiceError(400, "format must be expr, verbal or tree");
      res.status = 200;
      res.set_content(service_.expression(req.matches[1], *format), *format == EmitFormat::Tree ? kJson : kText);
    });
  });

  if (ui_dir_ && std::filesystem::is_directory(*ui_dir_)) {
    s.set_mount_point("/ui", ui_dir_->string());
  }
}

}  // namespace spider

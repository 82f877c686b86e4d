#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "spider/session.hpp"

namespace httplib {
class Server;
}

namespace spider {

// HTTP/JSON front end over a SessionService.
//
//   POST /schemas                       text/plain schema -> 201 {id} | 400 {error, violations}
//   GET  /schemas                       -> {schemas: [id...]}
//   GET  /schemas/{id}                  -> schema text
//   GET  /schemas/{id}/graph            -> schema graph document
//   POST /sessions                      {schema_id, root_type} -> 201 session view
//   GET  /sessions/{id}                 -> session view
//   POST /sessions/{id}/ops             {op: prune|respider, node: nK} -> session view
//   GET  /sessions/{id}/expression      ?format=expr|verbal|tree
//   GET  /ui/...                        static files from ui_dir, when given
class HttpServer {
 public:
  HttpServer(SessionService& service, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or throws.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop().
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  void routes();

  SessionService& service_;
  std::optional<std::filesystem::path> ui_dir_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace spider

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spider/ops.hpp"
#include "spider/schema_text.hpp"

namespace spider {

struct LogEntry {
  std::string op;   // "spider", "prune" or "respider"
  std::string arg;  // root type for spider, node id otherwise
  std::string at;   // UTC timestamp

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct Session {
  std::string id;
  std::string schema_id;
  std::string root_type;
  SpiderGraph graph;
  std::vector<LogEntry> log;
  std::string created;
  std::string updated;
};

// Rebuilds the tree a log describes. Throws SpiderError or
// std::invalid_argument when the log does not start with a spider entry or
// an entry fails.
SpiderGraph replay_log(const SchemaGraph& graph, const ConceptualSchema& schema, const std::vector<LogEntry>& log);

nlohmann::json session_to_json(const Session& s, const ConceptualSchema& schema);
Session session_from_json(const nlohmann::json& doc);

// Error carrying the HTTP status the service maps it to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message, nlohmann::json detail = nullptr)
      : std::runtime_error(message), status_(status), detail_(std::move(detail)) {}
  [[nodiscard]] int status() const { return status_; }
  [[nodiscard]] const nlohmann::json& detail() const { return detail_; }

 private:
  int status_;
  nlohmann::json detail_;
};

// Schemas and sessions, one document per entity under `data_dir`
// (schemas/<id>.ssd, sessions/<id>.json). Everything on disk is loaded at
// construction. Thread-safe: mutations of one session are serialized, reads
// and mutations of different sessions run concurrently.
class SessionService {
 public:
  explicit SessionService(std::filesystem::path data_dir);

  // Returns the new schema id. Throws ServiceError(400) with the diagnostics.
  std::string create_schema(const std::string& text);
  [[nodiscard]] std::vector<std::string> schema_ids() const;
  [[nodiscard]] std::string schema_text(const std::string& id) const;
  [[nodiscard]] nlohmann::json schema_graph(const std::string& id) const;

  nlohmann::json create_session(const std::string& schema_id, const std::string& root_type);
  nlohmann::json mutate_session(const std::string& session_id, const TreeOp& op);
  [[nodiscard]] nlohmann::json get_session(const std::string& session_id) const;
  // Body text for format expr|verbal|tree, matching the CLI's --emit output.
  [[nodiscard]] std::string expression(const std::string& session_id, EmitFormat format) const;

  [[nodiscard]] std::vector<std::string> session_ids() const;
  // Raw stored state, for replay checks.
  [[nodiscard]] Session session(const std::string& session_id) const;

 private:
  struct SchemaEntry {
    std::string text;
    ConceptualSchema schema;
    SchemaGraph graph;
  };
  struct SessionSlot {
    mutable std::shared_mutex mutex;
    Session state;
  };

  [[nodiscard]] std::shared_ptr<const SchemaEntry> find_schema(const std::string& id) const;
  [[nodiscard]] std::shared_ptr<SessionSlot> find_session(const std::string& id) const;
  [[nodiscard]] nlohmann::json view(const Session& s) const;
  void persist(const Session& s) const;
  void load();

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const SchemaEntry>> schemas_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
};

std::string random_id(std::size_t length = 16);
std::string utc_timestamp();

}  // namespace spider

#include "spider/session.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

namespace spider {

namespace fs = std::filesystem;

std::string random_id(std::size_t length) {
  static constexpr std::string_view kAlphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_";
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string out(length, ' ');
  for (auto& c : out) c = kAlphabet[pick(rng)];
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

SpiderGraph replay_log(const SchemaGraph& graph, const ConceptualSchema& schema, const std::vector<LogEntry>& log) {
  if (log.empty() || log.front().op != "spider") {
    throw std::invalid_argument("session log must start with a spider entry");
  }
  SpiderGraph g = spider_query(graph, schema, TypeName(log.front().arg));
  for (std::size_t i = 1; i < log.size(); ++i) {
    auto kind = parse_op_kind(log[i].op);
    auto node = NodeId::parse(log[i].arg);
    if (!kind || !node) throw std::invalid_argument("bad log entry " + log[i].op + " " + log[i].arg);
    g = apply_op(graph, schema, g, {*kind, *node});
  }
  return g;
}

nlohmann::json session_to_json(const Session& s, const ConceptualSchema& schema) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : s.log) log.push_back({{"op", e.op}, {"arg", e.arg}, {"at", e.at}});
  return {{"id", s.id},
          {"schema_id", s.schema_id},
          {"root_type", s.root_type},
          {"created", s.created},
          {"updated", s.updated},
          {"log", std::move(log)},
          {"graph", spider_to_json(s.graph, schema)}};
}

Session session_from_json(const nlohmann::json& doc) {
  try {
    Session s;
    s.id = doc.at("id").get<std::string>();
    s.schema_id = doc.at("schema_id").get<std::string>();
    s.root_type = doc.at("root_type").get<std::string>();
    s.created = doc.at("created").get<std::string>();
    s.updated = doc.at("updated").get<std::string>();
    for (const auto& e : doc.at("log")) {
      s.log.push_back({e.at("op").get<std::string>(), e.at("arg").get<std::string>(), e.at("at").get<std::string>()});
    }
    s.graph = spider_from_json(doc.at("graph"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed session document: ") + e.what());
  }
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename over the target.
void write_file_atomic(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp-" + random_id(8);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

nlohmann::json diagnostics_json(const std::vector<Diagnostic>& ds) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : ds) out.push_back({{"line", d.line}, {"column", d.column}, {"message", d.message}});
  return out;
}

int status_for(SpiderErrc code) {
  switch (code) {
    case SpiderErrc::UnknownType:
      return 400;
    case SpiderErrc::NodeLimit:
      return 422;
    default:
      return 409;
  }
}

}  // namespace

SessionService::SessionService(fs::path data_dir) : dir_(std::move(data_dir)) {
  fs::create_directories(dir_ / "schemas");
  fs::create_directories(dir_ / "sessions");
  load();
}

void SessionService::load() {
  for (const auto& entry : fs::directory_iterator(dir_ / "schemas")) {
    if (entry.path().extension() != ".ssd") continue;
    std::string text = read_file(entry.path());
    ConceptualSchema schema = parse_schema(text);
    SchemaGraph graph = build_graph(schema);
    schemas_[entry.path().stem().string()] =
        std::make_shared<const SchemaEntry>(SchemaEntry{std::move(text), std::move(schema), std::move(graph)});
  }
  for (const auto& entry : fs::directory_iterator(dir_ / "sessions")) {
    if (entry.path().extension() != ".json") continue;
    auto slot = std::make_shared<SessionSlot>();
    slot->state = session_from_json(nlohmann::json::parse(read_file(entry.path())));
    if (!schemas_.contains(slot->state.schema_id)) {
      throw std::runtime_error("session " + slot->state.id + " references missing schema " + slot->state.schema_id);
    }
    sessions_[slot->state.id] = std::move(slot);
  }
}

std::string SessionService::create_schema(const std::string& text) {
  ConceptualSchema schema;
  try {
    schema = parse_schema(text);
  } catch (const SchemaParseError& e) {
    throw ServiceError(400, e.what(), {{"violations", diagnostics_json(e.diagnostics())}});
  }
  SchemaGraph graph = build_graph(schema);
  const std::string id = random_id();
  write_file_atomic(dir_ / "schemas" / (id + ".ssd"), text);
  std::unique_lock lock(mutex_);
  schemas_[id] = std::make_shared<const SchemaEntry>(SchemaEntry{text, std::move(schema), std::move(graph)});
  return id;
}

std::vector<std::string> SessionService::schema_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : schemas_) out.push_back(id);
  return out;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::shared_ptr<const SessionService::SchemaEntry> SessionService::find_schema(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = schemas_.find(id);
  if (it == schemas_.end()) throw ServiceError(404, "unknown schema " + id);
  return it->second;
}

std::shared_ptr<SessionService::SessionSlot> SessionService::find_session(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session " + id);
  return it->second;
}

std::string SessionService::schema_text(const std::string& id) const { return find_schema(id)->text; }

nlohmann::json SessionService::schema_graph(const std::string& id) const {
  auto entry = find_schema(id);
  return graph_to_json(entry->graph, entry->schema);
}

nlohmann::json SessionService::view(const Session& s) const {
  const auto entry = find_schema(s.schema_id);
  nlohmann::json doc = session_to_json(s, entry->schema);
  const PathExpr e = root_expr(s.graph, entry->schema);
  doc["expression"] = render(e);
  doc["verbalization"] = verbalize(e, entry->schema);
  return doc;
}

void SessionService::persist(const Session& s) const {
  const auto entry = find_schema(s.schema_id);
  write_file_atomic(dir_ / "sessions" / (s.id + ".json"), session_to_json(s, entry->schema).dump(2) + "\n");
}

nlohmann::json SessionService::create_session(const std::string& schema_id, const std::string& root_type) {
  const auto entry = find_schema(schema_id);
  auto slot = std::make_shared<SessionSlot>();
  Session& s = slot->state;
  try {
    s.graph = spider_query(entry->graph, entry->schema, TypeName(root_type));
  } catch (const SpiderError& e) {
    throw ServiceError(status_for(e.code()), e.what());
  }
  s.id = random_id();
  s.schema_id = schema_id;
  s.root_type = root_type;
  s.created = s.updated = utc_timestamp();
  s.log.push_back({"spider", root_type, s.created});
  persist(s);
  nlohmann::json out = view(s);
  std::unique_lock lock(mutex_);
  sessions_[s.id] = std::move(slot);
  return out;
}

nlohmann::json SessionService::mutate_session(const std::string& session_id, const TreeOp& op) {
  auto slot = find_session(session_id);
  std::unique_lock lock(slot->mutex);
  Session next = slot->state;
  const auto entry = find_schema(next.schema_id);
  try {
    next.graph = apply_op(entry->graph, entry->schema, next.graph, op);
  } catch (const SpiderError& e) {
    throw ServiceError(status_for(e.code()), e.what());
  }
  next.updated = utc_timestamp();
  next.log.push_back({std::string(to_string(op.kind)), op.node.to_string(), next.updated});
  persist(next);
  slot->state = std::move(next);
  return view(slot->state);
}

nlohmann::json SessionService::get_session(const std::string& session_id) const {
  auto slot = find_session(session_id);
  std::shared_lock lock(slot->mutex);
  return view(slot->state);
}

Session SessionService::session(const std::string& session_id) const {
  auto slot = find_session(session_id);
  std::shared_lock lock(slot->mutex);
  return slot->state;
}

std::string SessionService::expression(const std::string& session_id, EmitFormat format) const {
  auto slot = find_session(session_id);
  std::shared_lock lock(slot->mutex);
  const auto entry = find_schema(slot->state.schema_id);
  return emit(slot->state.graph, entry->schema, format);
}

}  // namespace spider

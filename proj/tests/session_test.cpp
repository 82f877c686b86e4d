#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "spider/cli.hpp"
#include "spider/http_server.hpp"
#include "spider/session.hpp"
#include "support.hpp"

namespace spider {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("spider-test-" + random_id(10));
  TempDir() { fs::create_directories(path); }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// Hub with `n` relationships, each leading to its own object type.
std::string star_schema(int n) {
  std::string text = "objecttype Hub\n";
  for (int i = 0; i < n; ++i) {
    const auto k = std::to_string(i);
    text += "objecttype X" + k + "\nrelationship f" + k + " roles a" + k + ":Hub b" + k + ":X" + k + "\n";
  }
  return text;
}

TEST(SessionService, SchemaLifecycle) {
  TempDir dir;
  SessionService svc(dir.path);
  const auto id = svc.create_schema(testing::kExampleText);
  EXPECT_EQ(svc.schema_ids(), std::vector<std::string>{id});
  EXPECT_EQ(svc.schema_text(id), testing::kExampleText);
  EXPECT_EQ(svc.schema_graph(id)["edges"].size(), 7u);
  EXPECT_TRUE(fs::exists(dir.path / "schemas" / (id + ".ssd")));
  try {
    (void)svc.schema_text("missing");
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status(), 404);
  }
}

TEST(SessionService, InvalidSchemaCarriesDiagnostics) {
  TempDir dir;
  SessionService svc(dir.path);
  try {
    svc.create_schema("relationship f roles r:A");
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status(), 400);
    EXPECT_EQ(e.detail()["violations"],
              json::parse(R"([{"line":1,"column":24,"message":"unknown player type A"}])"));
  }
  EXPECT_TRUE(svc.schema_ids().empty());
}

TEST(SessionService, SessionOpsAndErrors) {
  TempDir dir;
  SessionService svc(dir.path);
  const auto schema = svc.create_schema(testing::kExampleText);
  const auto view = svc.create_session(schema, "B");
  const std::string id = view["id"];
  EXPECT_EQ(view["graph"]["nodes"].size(), 10u);
  EXPECT_EQ(view["expression"].get<std::string>().substr(0, 11), "[D1: D o B,");

  auto status_of = [&](auto&& fn) {
    try {
      fn();
    } catch (const ServiceError& e) {
      return e.status();
    }
    return 0;
  };
  EXPECT_EQ(status_of([&] { svc.create_session(schema, "Z"); }), 400);
  EXPECT_EQ(status_of([&] { svc.create_session("nope", "B"); }), 404);
  EXPECT_EQ(status_of([&] { svc.mutate_session("nope", {TreeOp::Kind::Prune, NodeId(1)}); }), 404);
  EXPECT_EQ(status_of([&] { svc.mutate_session(id, {TreeOp::Kind::Prune, NodeId(0)}); }), 409);
  EXPECT_EQ(status_of([&] { svc.mutate_session(id, {TreeOp::Kind::Respider, NodeId(3)}); }), 409);
  EXPECT_EQ(status_of([&] { svc.mutate_session(id, {TreeOp::Kind::Prune, NodeId(99)}); }), 409);
  // Failed ops leave no trace.
  EXPECT_EQ(svc.session(id).log.size(), 1u);

  const auto pruned = svc.mutate_session(id, {TreeOp::Kind::Prune, NodeId(2)});
  EXPECT_EQ(pruned["expression"], "[D1: D o B; B]");
  EXPECT_EQ(pruned["log"].size(), 2u);
  EXPECT_EQ(pruned["log"][1]["op"], "prune");
  EXPECT_EQ(pruned["log"][1]["arg"], "n2");
  EXPECT_EQ(svc.get_session(id), pruned);
}

TEST(SessionService, ReplayReproducesStoredTree) {
  TempDir dir;
  SessionService svc(dir.path);
  const auto schema_id = svc.create_schema(testing::kExampleText);
  const std::string id = svc.create_session(schema_id, "B")["id"];
  for (auto op : {TreeOp{TreeOp::Kind::Prune, NodeId(3)}, TreeOp{TreeOp::Kind::Respider, NodeId(2)},
                  TreeOp{TreeOp::Kind::Prune, NodeId(1)}}) {
    svc.mutate_session(id, op);
  }
  const auto schema = testing::example_schema();
  const auto stored = svc.session(id);
  const auto replayed = replay_log(build_graph(schema), schema, stored.log);
  EXPECT_EQ(spider_to_json(replayed, schema).dump(), spider_to_json(stored.graph, schema).dump());
  EXPECT_EQ(replayed, stored.graph);
}

TEST(SessionService, ReplayRejectsBadLogs) {
  const auto schema = testing::example_schema();
  const auto graph = build_graph(schema);
  EXPECT_THROW(replay_log(graph, schema, {}), std::invalid_argument);
  EXPECT_THROW(replay_log(graph, schema, {{"prune", "n1", ""}}), std::invalid_argument);
  EXPECT_THROW(replay_log(graph, schema, {{"spider", "B", ""}, {"grow", "n1", ""}}), std::invalid_argument);
  EXPECT_THROW(replay_log(graph, schema, {{"spider", "B", ""}, {"prune", "n0", ""}}), SpiderError);
}

TEST(SessionService, SurvivesRestart) {
  TempDir dir;
  std::string id;
  json before;
  {
    SessionService svc(dir.path);
    const auto schema = svc.create_schema(testing::kExampleText);
    id = svc.create_session(schema, "A")["id"];
    before = svc.mutate_session(id, {TreeOp::Kind::Prune, NodeId(6)});
  }
  SessionService again(dir.path);
  EXPECT_EQ(again.get_session(id), before);
  EXPECT_EQ(again.session_ids(), std::vector<std::string>{id});
  // Ids keep counting from the stored next_id after a restart: f regrows
  // B, which regrows D.
  const auto after = again.mutate_session(id, {TreeOp::Kind::Respider, NodeId(2)});
  EXPECT_EQ(after["graph"]["next_id"], before["graph"]["next_id"].get<int>() + 2);
}

TEST(SessionService, NoTempFilesLeftBehind) {
  TempDir dir;
  SessionService svc(dir.path);
  const auto schema = svc.create_schema(testing::kExampleText);
  const std::string id = svc.create_session(schema, "B")["id"];
  svc.mutate_session(id, {TreeOp::Kind::Prune, NodeId(1)});
  for (const auto& e : fs::recursive_directory_iterator(dir.path)) {
    EXPECT_EQ(e.path().string().find(".tmp-"), std::string::npos) << e.path();
  }
}

TEST(SessionService, ConcurrentPrunesOnDisjointBranchesAreAllKept) {
  constexpr int kBranches = 16;
  TempDir dir;
  SessionService svc(dir.path);
  const auto schema = svc.create_schema(star_schema(kBranches));
  const auto view = svc.create_session(schema, "Hub");
  const std::string id = view["id"];
  // Root's children are n1..n16, one per relationship.
  ASSERT_EQ(view["graph"]["nodes"][0]["children"].size(), static_cast<std::size_t>(kBranches));

  std::vector<std::thread> workers;
  for (int i = 1; i <= kBranches; ++i) {
    workers.emplace_back([&, i] {
      svc.mutate_session(id, {TreeOp::Kind::Prune, NodeId(static_cast<std::uint64_t>(i))});
      (void)svc.get_session(id);
    });
  }
  for (auto& t : workers) t.join();

  const auto s = svc.session(id);
  EXPECT_EQ(s.graph.size(), 1u);
  EXPECT_EQ(s.log.size(), static_cast<std::size_t>(kBranches + 1));
  SessionService reloaded(dir.path);
  EXPECT_EQ(reloaded.session(id).graph, s.graph);
}

// Server on a free port, serving until destroyed.
struct LiveServer {
  TempDir dir;
  SessionService service{dir.path};
  HttpServer server;
  int port;
  std::thread thread;
  explicit LiveServer(std::optional<fs::path> ui = std::nullopt) : server(service, std::move(ui)) {
    port = server.bind("127.0.0.1", 0);
    thread = std::thread([this] { server.serve(); });
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

TEST(Http, EndToEnd) {
  LiveServer live;
  auto cli = live.client();

  auto res = cli.Post("/schemas", testing::kExampleText, "text/plain");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201);
  const std::string schema = json::parse(res->body)["id"];

  res = cli.Get("/schemas");
  EXPECT_EQ(json::parse(res->body)["schemas"], json::array({schema}));
  res = cli.Get("/schemas/" + schema);
  EXPECT_EQ(res->body, testing::kExampleText);
  res = cli.Get("/schemas/" + schema + "/graph");
  EXPECT_EQ(json::parse(res->body)["nodes"].size(), 6u);

  res = cli.Post("/sessions", json{{"schema_id", schema}, {"root_type", "B"}}.dump(), "application/json");
  ASSERT_EQ(res->status, 201);
  const std::string id = json::parse(res->body)["id"];

  res = cli.Post("/sessions/" + id + "/ops", R"({"op":"prune","node":"n2"})", "application/json");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["expression"], "[D1: D o B; B]");

  res = cli.Get("/sessions/" + id + "/expression");
  EXPECT_EQ(res->body, "[D1: D o B; B]\n");
  res = cli.Get("/sessions/" + id + "/expression?format=verbal");
  EXPECT_EQ(res->body, "B:\n  - D which is a B\n");
  res = cli.Get("/sessions/" + id + "/expression?format=tree");
  EXPECT_EQ(json::parse(res->body)["nodes"].size(), 2u);

  res = cli.Get("/sessions/" + id);
  EXPECT_EQ(json::parse(res->body)["log"].size(), 2u);
}

TEST(Http, ErrorStatuses) {
  LiveServer live;
  auto cli = live.client();
  auto res = cli.Post("/schemas", "objecttype A\nobjecttype A\n", "text/plain");
  ASSERT_EQ(res->status, 400);
  auto body = json::parse(res->body);
  EXPECT_EQ(body["violations"][0]["line"], 2);
  EXPECT_TRUE(body.contains("error"));

  const std::string schema = json::parse(cli.Post("/schemas", testing::kExampleText, "text/plain")->body)["id"];
  EXPECT_EQ(cli.Get("/schemas/nothing")->status, 404);
  EXPECT_EQ(cli.Get("/sessions/nothing")->status, 404);
  EXPECT_EQ(cli.Post("/sessions", "{not json", "application/json")->status, 400);
  EXPECT_EQ(cli.Post("/sessions", R"({"schema_id":1})", "application/json")->status, 400);
  EXPECT_EQ(cli.Post("/sessions", json{{"schema_id", schema}, {"root_type", "Z"}}.dump(), "application/json")->status,
            400);
  EXPECT_EQ(cli.Post("/sessions/nothing/ops", R"({"op":"prune","node":"n1"})", "application/json")->status, 404);

  const std::string id = json::parse(
      cli.Post("/sessions", json{{"schema_id", schema}, {"root_type", "B"}}.dump(), "application/json")->body)["id"];
  const auto op = [&](const char* body) { return cli.Post("/sessions/" + id + "/ops", body, "application/json")->status; };
  EXPECT_EQ(op(R"({"op":"grow","node":"n1"})"), 400);
  EXPECT_EQ(op(R"({"op":"prune","node":"n0"})"), 409);
  EXPECT_EQ(op(R"({"op":"prune","node":"n77"})"), 409);
  EXPECT_EQ(op(R"({"op":"prune","node":"banana"})"), 409);
  EXPECT_EQ(op(R"({"op":"respider","node":"n2"})"), 409);
  EXPECT_EQ(cli.Get("/sessions/" + id + "/expression?format=json")->status, 400);
}

TEST(Http, ServesUiDirectory) {
  TempDir ui;
  std::ofstream(ui.path / "index.html") << "<html>spider</html>";
  LiveServer live(ui.path);
  auto res = live.client().Get("/ui/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>spider</html>");
}

TEST(Http, ExpressionMatchesCli) {
  TempDir dir;
  const auto schema_file = dir.path / "example.ssd";
  std::ofstream(schema_file) << testing::kExampleText;

  LiveServer live;
  auto cli = live.client();
  const std::string schema = json::parse(cli.Post("/schemas", testing::kExampleText, "text/plain")->body)["id"];
  const std::string id = json::parse(
      cli.Post("/sessions", json{{"schema_id", schema}, {"root_type", "B"}}.dump(), "application/json")->body)["id"];
  cli.Post("/sessions/" + id + "/ops", R"({"op":"prune","node":"n5"})", "application/json");
  cli.Post("/sessions/" + id + "/ops", R"({"op":"prune","node":"n4"})", "application/json");

  for (const char* fmt : {"expr", "verbal", "tree"}) {
    std::ostringstream out, err;
    ASSERT_EQ(run_cli({"spider", schema_file.string(), "--root", "B", "--op", "prune:n5", "--op", "prune:n4", "--emit",
                       fmt},
                      out, err),
              0)
        << err.str();
    EXPECT_EQ(cli.Get("/sessions/" + id + "/expression?format=" + std::string(fmt))->body, out.str()) << fmt;
  }
}

}  // namespace
}  // namespace spider

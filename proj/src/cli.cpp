#include "spider/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spider/http_server.hpp"
#include "spider/ops.hpp"
#include "spider/schema_text.hpp"

namespace spider {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses and prints diagnostics; returns false when the file is unusable.
bool load_schema(const std::string& path, ConceptualSchema& schema, std::ostream& report) {
  try {
    schema = parse_schema(read_text(path));
    return true;
  } catch (const SchemaParseError& e) {
    for (const auto& d : e.diagnostics()) report << path << ": " << d.to_string() << '\n';
  }
  return false;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + path);
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spider query builder for ORM conceptual schemas", "spider-query"};
  app.require_subcommand(1);

  std::string schema_path;
  std::string output_path;

  auto* validate = app.add_subcommand("validate", "Check a schema file; prints one line per problem");
  validate->add_option("schema", schema_path, "Schema file (.ssd)")->required();

  auto* graph = app.add_subcommand("graph", "Print the schema graph document");
  graph->add_option("schema", schema_path, "Schema file (.ssd)")->required();
  graph->add_option("-o,--output", output_path, "Write to this file instead of stdout");

  std::string root;
  std::vector<std::string> op_texts;
  std::string emit_name = "expr";
  auto* spider_cmd = app.add_subcommand("spider", "Build a spider query, apply edits, print the result");
  spider_cmd->add_option("schema", schema_path, "Schema file (.ssd)")->required();
  spider_cmd->add_option("-r,--root", root, "Root type")->required();
  spider_cmd->add_option("--op", op_texts, "Edit applied in order: prune:nK or respider:nK (repeatable)");
  spider_cmd->add_option("-e,--emit", emit_name, "Output format")
      ->check(CLI::IsMember({"tree", "expr", "verbal", "json"}))
      ->capture_default_str();
  spider_cmd->add_option("-o,--output", output_path, "Write to this file instead of stdout");

  std::string listen = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "spider-data";
  std::string ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--listen", listen, "Listen address")->envname("SPIDER_LISTEN")->capture_default_str();
  serve->add_option("--port", port, "Listen port (0 picks a free one)")
      ->envname("SPIDER_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Directory for persisted schemas and sessions")
      ->envname("SPIDER_DATA_DIR")
      ->capture_default_str();
  serve->add_option("--ui-dir", ui_dir, "Static web UI assets served under /ui")->envname("SPIDER_UI_DIR");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      ConceptualSchema schema;
      return load_schema(schema_path, schema, out) ? 0 : 1;
    }

    if (serve->parsed()) {
      SessionService service(data_dir);
      HttpServer server(service, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
      const int bound = server.bind(listen, port);
      err << "spider-query: serving on http://" << listen << ":" << bound << " (data in " << data_dir << ")"
          << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.serve();
      g_server = nullptr;
      return 0;
    }

    ConceptualSchema schema;
    if (!load_schema(schema_path, schema, err)) return 1;

    if (graph->parsed()) {
      write_output(output_path, graph_to_json(build_graph(schema), schema).dump(2) + "\n", out);
      return 0;
    }

    if (spider_cmd->parsed()) {
      std::vector<TreeOp> ops;
      for (const auto& t : op_texts) {
        try {
          ops.push_back(parse_tree_op(t));
        } catch (const std::invalid_argument& e) {
          err << "spider-query: " << e.what() << '\n';
          return 2;
        }
      }
      const SchemaGraph schema_graph = build_graph(schema);
      const SpiderGraph tree = run_script(schema_graph, schema, TypeName(root), ops);
      write_output(output_path, emit(tree, schema, *parse_emit_format(emit_name)), out);
      return 0;
    }
    return 2;
  } catch (const std::exception& e) {
    err << "spider-query: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace spider

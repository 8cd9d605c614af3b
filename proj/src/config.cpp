#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "apifsm/error.hpp"
#include "apifsm/io.hpp"

namespace apifsm {

namespace {

using Json = nlohmann::json;

std::string read_text(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(what + ": cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> strings(const Json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < node.size(); ++k) {
    if (!node[k].is_string()) throw ConfigError(path + "[" + std::to_string(k) + "]: expected a string");
    out.push_back(node[k].get<std::string>());
  }
  return out;
}

std::string string_field(const Json& node, const std::string& path) {
  if (!node.is_string()) throw ConfigError(path + ": expected a string");
  return node.get<std::string>();
}

Predicate predicate_field(const std::string& text, const std::string& path) {
  try {
    return Predicate::parse(text);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
}

}  // namespace

ExtractionConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> kKeys{"sources", "collection_kinds", "context",  "state_predicates",
                                           "states",  "solver",           "blocking", "prune_unreachable",
                                           "outputs", "catalog",          "threads"};
  for (const auto& [key, _] : root.items())
    if (!kKeys.count(key)) throw ConfigError(key + ": unknown key");

  ExtractionConfig cfg;
  cfg.base_dir = base_dir;
  if (!root.contains("sources")) throw ConfigError("sources: missing");
  auto sources = strings(root["sources"], "sources");
  if (sources.empty()) throw ConfigError("sources: at least one source is required");
  for (std::size_t k = 0; k < sources.size(); ++k) {
    auto path = base_dir / sources[k];
    if (!std::filesystem::is_regular_file(path))
      throw ConfigError("sources[" + std::to_string(k) + "]: no such file " + path.string());
    cfg.sources.push_back(path);
  }

  if (root.contains("collection_kinds")) {
    const auto& kinds = root["collection_kinds"];
    if (!kinds.is_object()) throw ConfigError("collection_kinds: expected an object");
    for (const auto& [field, kind] : kinds.items())
      cfg.collection_kinds[field] = string_field(kind, "collection_kinds." + field);
  }

  if (root.contains("context")) {
    const auto& ctx = root["context"];
    if (ctx.is_string()) {
      if (ctx.get<std::string>() != "auto") throw ConfigError("context: expected \"auto\" or a list of symbols");
    } else {
      cfg.context.automatic = false;
      cfg.context.symbols = strings(ctx, "context");
    }
  }

  if (root.contains("state_predicates")) {
    const auto& sp = root["state_predicates"];
    if (sp.is_string()) {
      if (sp.get<std::string>() != "all") throw ConfigError("state_predicates: expected \"all\" or a list");
    } else {
      auto names = strings(sp, "state_predicates");
      for (std::size_t k = 0; k < names.size(); ++k)
        predicate_field(names[k], "state_predicates[" + std::to_string(k) + "]");
      cfg.state_predicates = names;
    }
  }

  if (root.contains("states")) {
    const auto& states = root["states"];
    if (!states.is_array()) throw ConfigError("states: expected an array of valuations");
    if (cfg.state_predicates) throw ConfigError("states: cannot be combined with state_predicates");
    cfg.states.emplace();
    for (std::size_t k = 0; k < states.size(); ++k) {
      const std::string path = "states[" + std::to_string(k) + "]";
      if (!states[k].is_object()) throw ConfigError(path + ": expected an object of predicate: boolean");
      Valuation v;
      for (const auto& [name, value] : states[k].items()) {
        if (!value.is_boolean()) throw ConfigError(path + "." + name + ": expected a boolean");
        v[predicate_field(name, path + "." + name)] = value.get<bool>();
      }
      cfg.states->push_back(std::move(v));
    }
  }

  if (root.contains("solver")) {
    const auto& solver = root["solver"];
    if (solver.is_string()) {
      if (solver.get<std::string>() != "embedded") throw ConfigError("solver: expected \"embedded\" or {\"command\"}");
    } else if (solver.is_object()) {
      for (const auto& [key, _] : solver.items())
        if (key != "command") throw ConfigError("solver." + key + ": unknown key");
      if (!solver.contains("command")) throw ConfigError("solver.command: missing");
      cfg.solver.command = string_field(solver["command"], "solver.command");
      if (cfg.solver.command.empty()) throw ConfigError("solver.command: must not be empty");
    } else {
      throw ConfigError("solver: expected \"embedded\" or {\"command\"}");
    }
  }

  if (root.contains("blocking")) {
    auto mode = string_field(root["blocking"], "blocking");
    if (mode == "projection") cfg.blocking = BlockingMode::Projection;
    else if (mode == "full-trace") cfg.blocking = BlockingMode::FullTrace;
    else throw ConfigError("blocking: expected \"projection\" or \"full-trace\"");
  }

  if (root.contains("prune_unreachable")) {
    if (!root["prune_unreachable"].is_boolean()) throw ConfigError("prune_unreachable: expected a boolean");
    cfg.prune_unreachable = root["prune_unreachable"].get<bool>();
  }

  if (root.contains("outputs")) {
    const auto& outputs = root["outputs"];
    if (!outputs.is_object()) throw ConfigError("outputs: expected an object");
    for (const auto& [key, value] : outputs.items()) {
      if (key != "dot" && key != "json") throw ConfigError("outputs." + key + ": unknown key");
      std::string target = value.is_null() ? "" : string_field(value, "outputs." + key);
      (key == "dot" ? cfg.dot_output : cfg.json_output) = target;
    }
  }
  if (cfg.sources.size() > 1) {
    for (const auto* out : {&cfg.dot_output, &cfg.json_output})
      if (!out->empty() && out->find("{unit}") == std::string::npos)
        throw ConfigError(std::string("outputs.") + (out == &cfg.dot_output ? "dot" : "json") +
                          ": several sources need a {unit} placeholder");
  }

  if (root.contains("catalog")) {
    auto path = base_dir / string_field(root["catalog"], "catalog");
    if (!std::filesystem::is_regular_file(path)) throw ConfigError("catalog: no such file " + path.string());
    cfg.catalog = path;
  }

  if (root.contains("threads")) {
    const auto& threads = root["threads"];
    if (!threads.is_number_unsigned() || threads.get<unsigned>() == 0)
      throw ConfigError("threads: expected a positive integer");
    cfg.threads = threads.get<unsigned>();
  }
  return cfg;
}

ExtractionConfig load_config(const std::filesystem::path& path) {
  auto text = read_text(path, "config");
  auto dir = path.parent_path();
  return parse_config(text, dir.empty() ? std::filesystem::path(".") : dir);
}

SemanticsCatalog config_catalog(const ExtractionConfig& config) {
  SemanticsCatalog catalog = SemanticsCatalog::builtin();
  if (config.catalog) catalog.merge(SemanticsCatalog::from_file(*config.catalog));
  return catalog;
}

ExtractionOptions extraction_options(const ExtractionConfig& config, const SemanticsCatalog& catalog) {
  ExtractionOptions options;
  options.catalog = &catalog;
  options.context = config.context;
  options.state_predicates = config.state_predicates;
  options.custom_states = config.states;
  options.solver = config.solver;
  options.blocking = config.blocking;
  options.prune_unreachable = config.prune_unreachable;
  options.threads = config.threads;
  return options;
}

ParseOptions config_parse_options(const ExtractionConfig& config, const SemanticsCatalog& catalog) {
  ParseOptions options = catalog.parse_options();
  options.kind_overrides = config.collection_kinds;
  return options;
}

ApiUnitModel load_unit(const std::filesystem::path& source, const ParseOptions& options) {
  return parse_unit(read_text(source, "sources"), options);
}

}  // namespace apifsm

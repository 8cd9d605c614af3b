#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apifsm/fsm.hpp"

namespace apifsm {

// ---------------------------------------------------------------------------
// Configuration

struct ExtractionConfig {
  std::filesystem::path base_dir;  // relative paths resolve against it
  std::vector<std::filesystem::path> sources;
  /// Field name or Unit.field to collection kind.
  std::map<std::string, std::string> collection_kinds;
  ContextSelection context;
  std::optional<std::vector<std::string>> state_predicates;
  std::optional<std::vector<Valuation>> states;
  SolverConfig solver;
  BlockingMode blocking = BlockingMode::Projection;
  bool prune_unreachable = false;
  std::optional<std::filesystem::path> catalog;
  /// Output paths; `{unit}` expands to the unit name. Empty disables.
  std::string dot_output = "model.dot";
  std::string json_output = "model.json";
  unsigned threads = 1;
};

/// Parses config JSON. Paths are resolved against `base_dir`; sources must
/// exist. Throws ConfigError whose message starts with the field path.
ExtractionConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
ExtractionConfig load_config(const std::filesystem::path& path);

/// Builtin catalog merged with the configured extension file.
SemanticsCatalog config_catalog(const ExtractionConfig& config);
ExtractionOptions extraction_options(const ExtractionConfig& config, const SemanticsCatalog& catalog);
ParseOptions config_parse_options(const ExtractionConfig& config, const SemanticsCatalog& catalog);

/// Reads and parses one source file of the configuration.
ApiUnitModel load_unit(const std::filesystem::path& source, const ParseOptions& options);

// ---------------------------------------------------------------------------
// Serialisation

std::string emit_dot(const Fsm& fsm);
std::string emit_json(const Fsm& fsm);
/// Inverse of emit_json. Throws ConfigError on malformed documents.
Fsm parse_fsm_json(std::string_view text);
Fsm load_fsm(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Diff

struct TransitionLabel {
  std::string from;
  std::string method;
  std::string guard;
  std::string to;

  auto operator<=>(const TransitionLabel&) const = default;
};

struct DiffReport {
  std::vector<std::string> predicates_only_a, predicates_only_b;
  std::vector<std::string> alphabet_only_a, alphabet_only_b;
  std::vector<std::string> states_only_a, states_only_b;
  std::vector<TransitionLabel> transitions_only_a, transitions_only_b;

  bool changed() const;
};

/// States are matched by valuation; transitions by endpoints, method and
/// guard equivalence. Throws IncomparableModels for disjoint alphabets.
DiffReport diff_fsm(const Fsm& a, const Fsm& b);
/// Raw DNF equivalence by truth table over the union of guard variables.
bool guards_equivalent(const Guard& a, const Guard& b);

std::string format_report(const DiffReport& report);
std::string report_json(const DiffReport& report);

// ---------------------------------------------------------------------------
// Command line

/// Exit codes: 0 success, 1 usage or configuration error, 2 analysis error,
/// 3 diff found a behavioural change.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace apifsm

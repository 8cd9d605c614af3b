#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "apifsm/io.hpp"
#include "apifsm/semantics.hpp"
#include "apifsm/source_model.hpp"

namespace testing {

inline std::filesystem::path sample(const std::string& relative) { return std::filesystem::path(APIFSM_SAMPLES) / relative; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline apifsm::ApiUnitModel example_unit(const std::string& kind) {
  const std::string dir = kind == "TreeSet" ? "treeset" : "hashset";
  return apifsm::parse_unit(read_file(sample(dir + "/ExampleImpl.java")),
                            apifsm::SemanticsCatalog::builtin().parse_options());
}

inline apifsm::ExtractionOptions example_options(const std::string& kind) {
  apifsm::ExtractionOptions options;
  options.state_predicates = kind == "TreeSet" ? std::vector<std::string>{"empty(idSet)", "exc"}
                                               : std::vector<std::string>{"empty(idSet)"};
  return options;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("apifsm-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing

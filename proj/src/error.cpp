#include "apifsm/error.hpp"

namespace apifsm {

SourceError::SourceError(const std::string& category, const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + category + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

}  // namespace apifsm

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbl {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CycleDetected : Error {
  explicit CycleDetected(std::vector<std::pair<int, int>> cycle_edges)
      : Error(describe(cycle_edges)), cycle(std::move(cycle_edges)) {}

  std::vector<std::pair<int, int>> cycle;

 private:
  static std::string describe(const std::vector<std::pair<int, int>>& edges) {
    std::ostringstream os;
    os << "cycle detected:";
    for (const auto& [c, e] : edges) os << " " << c << "->" << e;
    return os.str();
  }
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct MissingParamRow : Error {
  using Error::Error;
};
struct SameVariable : Error {
  using Error::Error;
};
struct InvalidOrder : Error {
  using Error::Error;
};
struct OverlappingVariableSets : Error {
  using Error::Error;
};
struct InvalidSize : Error {
  using Error::Error;
};
struct InvalidSwitch : Error {
  using Error::Error;
};
struct UnknownAction : Error {
  using Error::Error;
};
struct DomainMismatch : Error {
  using Error::Error;
};
struct NonBinaryInput : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  ValidationError(std::string field_name, const std::string& reason)
      : Error(field_name + ": " + reason), field(std::move(field_name)) {}

  std::string field;
};

}  // namespace cbl

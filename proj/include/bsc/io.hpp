#pragma once

#include <string>

#include "bsc/complex.hpp"

namespace bsc {

struct ParseError : std::runtime_error {
  std::string where;  // json path or line info
  ParseError(std::string w, const std::string& msg)
      : std::runtime_error(msg + " (at " + w + ")"), where(std::move(w)) {}
};

// .bsc documents are JSON with sections meta/vertices/edges/cells.
// Unknown fields are a parse error; referential integrity is checked here so
// the returned value is navigable.
BranchComplex parse_complex(const std::string& text);
std::string serialize_complex(const BranchComplex& c);

BranchComplex load_complex_file(const std::string& path);
void save_complex_file(const BranchComplex& c, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace bsc

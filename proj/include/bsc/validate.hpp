#pragma once

#include <string>
#include <vector>

#include "bsc/complex.hpp"

namespace bsc {

struct Finding {
  std::string code;
  std::string location;
  std::string message;
  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;
  bool ok() const { return errors.empty(); }
  bool refined() const;  // no loop / non-disk warnings either
};

// Checks the structural invariants of the model: double point and
// subdivision degrees, strand partitions, branch/stop side references,
// closed boundary walks, side counts (singular edges carry three cell
// sides, auxiliary one or two), orientation coherence, and the local corner
// pattern at singular vertices.  Loop edges and non-disk cells are warnings
// (they are removed by refinement).
ValidationReport validate_complex(const BranchComplex& c);

}  // namespace bsc

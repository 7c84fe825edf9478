#pragma once

#include <optional>

#include "bsc/complex.hpp"

namespace bsc {

enum class CellKind { plain, surface_of_contact, sink_surface, twisted_disk_of_contact };

struct CellClass {
  CellKind kind = CellKind::plain;
  int sign = 0;  // twisted disks only
  bool operator==(const CellClass&) const = default;
};

// Classification of a compact cell by its boundary branch directions:
// surface of contact when every boundary edge is singular and fronts into the
// cell with all transitions smooth; sink surface once corners appear; twisted
// disk when the cell is a disk, every corner spans one quadrant at a double
// point and all corner signs agree.
CellClass classify_cell(const BranchComplex& c, CellId cell);

// A transition is smooth when the walk continues the same strand.
bool smooth_transition(const BranchComplex& c, const Cell& cell, int word, int pos);

}  // namespace bsc

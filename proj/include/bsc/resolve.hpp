#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bsc/complex.hpp"
#include "bsc/splitting.hpp"
#include "bsc/tracks.hpp"

namespace bsc {

// Driver for the resolving construction: guard zones around the refined
// decomposition's vertices, interval traces over its edges, round-robin
// scheduling, and adapted splittings chosen by the twisted-curve detector.

// Refines a complex until every cell is a disk and no edge is a loop, adding
// only subdivision vertices and auxiliary edges.
BranchComplex refine_decomposition(const BranchComplex& c);

// Contracts the interior auxiliary edges away: the working surface the
// splittings act on (sectors are whole sheets again).
BranchComplex strip_auxiliary(const BranchComplex& refined);

struct MarkInfo {
  std::uint64_t id = 0;
  EdgeId edge = 0;      // frame edge carrying the crossing
  VertexId zone = 0;    // owning guard zone
  std::uint64_t order = 0;  // creation counter; later = nearer its vertex
  EdgeId cusp_edge = 0;     // singular edge of the working complex
  int cusp_end = 0;         // end of that edge the mark's tongue hangs near
};

struct EdgeTrace {
  TrainTrack track;                      // interval, tail -> head
  std::vector<std::uint64_t> marks;      // aligned with track.events
  std::vector<std::string> left_addr;    // plaque addresses at the tail boundary
};

struct LogEntry {
  std::uint64_t stage = 0;
  std::string kind;     // "split" | "park" | "spawn"
  EdgeId edge = 0;      // frame edge
  std::uint64_t mark = 0;
  std::string variant;  // split entries
  CellId cell = 0;      // surgered cell
};

struct ResolveState {
  BranchComplex frame;    // refined decomposition (fixed)
  BranchComplex complex;  // current working surface
  std::uint64_t stage = 1;
  std::map<EdgeId, EdgeTrace> traces;
  std::map<std::uint64_t, MarkInfo> mark_info;
  std::vector<LogEntry> log;
  std::uint64_t next_mark = 1;
  std::uint64_t next_order = 1;
  std::uint64_t backward_violations = 0;  // must stay 0
};

// Stage-one state: traces with at most one merge near the tail zone and one
// split near the head zone per edge, per the parallel-copy rule.  Throws
// ComplexError("E_HAS_TWISTED") when the input carries a twisted curve,
// ComplexError("E_UNREFINED") when cells are not disks yet.
ResolveState initial_split(const BranchComplex& refined);

// round-robin scheduler
VertexId schedule(const std::vector<VertexId>& vertex_ids, std::uint64_t n);

// One vertex pass: pushes every mark owned by the scheduled zone along its
// edge (adapted splittings at face-to-face meetings, parks at far ends) and
// drags parked caps through the junction onto the carrier sheet's
// neighbouring edges.
void resolve_step(ResolveState& s);

// test hook: push a single mark with a forced variant choice
void push_mark_for_test(ResolveState& s, std::uint64_t mark_id, std::optional<Variant> forced);

void run(ResolveState& s, std::uint64_t steps);

struct ZonePrefix {
  bool resolved = false;
  std::vector<std::string> transversal;  // plaque addresses, bottom-up
};

struct EdgeProfile {
  std::vector<int> counts;  // strand counts per segment along the edge
};

struct LaminationPrefix {
  std::map<VertexId, ZonePrefix> zones;
  std::map<EdgeId, EdgeProfile> edges;
};

LaminationPrefix lamination_prefix(const ResolveState& s);

struct CellVerdict {
  CellId cell = 0;
  bool ok = false;
  TrainTrack boundary_track;
  std::optional<TwistPattern> pattern;
};

// Circular boundary tracks of the frame cells, assembled from the traces and
// fed through the peeling decomposition.
std::vector<CellVerdict> certify_null_holonomy(const ResolveState& s);

// boundary track assembly, exposed for tests
TrainTrack assemble_cell_track(const ResolveState& s, CellId cell);

}  // namespace bsc

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bsc {

// Oriented train tracks fully carried by an annulus (circular) or a square
// (interval), cut into a split/merge event word over vertically ordered
// strands.  Positions are 1-based from the bottom strand.

enum class Topology { circular, interval };
enum class EventKind { split, merge };

struct TrackEvent {
  EventKind kind = EventKind::split;
  int pos = 1;
  bool operator==(const TrackEvent&) const = default;
};

struct TrackError : std::runtime_error {
  std::string code;
  TrackError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

struct TrainTrack {
  Topology topology = Topology::circular;
  int start_count = 1;
  std::vector<TrackEvent> events;

  bool operator==(const TrainTrack&) const = default;

  // strand count entering event i (i == events.size() gives the final count)
  int count_before(std::size_t i) const;
  int end_count() const { return count_before(events.size()); }
  // throws TrackError("E_WORD") on malformed words
  void check() const;
};

// Vertical mirror: position p maps to count+1-p, swapping over/under.
TrainTrack mirror(const TrainTrack& t);

enum class BranchDir { direct, backward };  // split / merge
enum class BranchSide { over, under };      // other branch above / below

struct BranchingTag {
  std::size_t event;  // index into events
  BranchDir dir;
  BranchSide side;
  bool operator==(const BranchingTag&) const = default;
};

struct SmoothCycle {
  // Strand position held in each gap the cycle passes through.  Gap g lies
  // before event g % E; the trace stores one position per visited gap, in
  // order, starting from the lexicographically least (gap, pos) node.
  int laps = 1;
  std::vector<int> gaps;       // visited gap indices
  std::vector<int> positions;  // strand position in each visited gap
  std::vector<BranchingTag> branchings;
  bool operator==(const SmoothCycle&) const = default;
};

// Every simple directed cycle of the strand-segment graph, deterministic
// order; throws TrackError("E_LIMIT") when more than max_cycles exist.
std::vector<SmoothCycle> enumerate_smooth_cycles(const TrainTrack& t,
                                                 std::size_t max_cycles = 100000);

// Lemma "condition (i)": along every smooth closed curve either no under
// branching or both a direct-under and a backward-under one.
std::optional<SmoothCycle> check_condition_i(const TrainTrack& t,
                                             std::size_t max_cycles = 100000);

// The circle occupying the topmost position at every angular coordinate.
SmoothCycle max_circle(const TrainTrack& t);

struct CircleDecomposition {
  std::vector<SmoothCycle> circles;
};

struct TwistPattern {
  SmoothCycle top_circle;       // the violating stage's top circle
  TrainTrack stage;             // the track at the failing stage
};

// Peeling decomposition: repeatedly detach the top circle along a
// direct-under -> backward-under arc.  Returns the twist pattern when some
// stage's top circle carries under branchings of only one kind.
std::variant<CircleDecomposition, TwistPattern> peel_decompose(const TrainTrack& t);

enum class StopRule { stop_at_next_split, run_to_end, resolve_upper, resolve_lower };

struct BoundaryMark {
  int pos = 0;  // strand pair (pos, pos+1) merging at the right boundary
};

struct IntervalSlideResult {
  TrainTrack track;
  std::optional<BoundaryMark> emitted;       // run_to_end only
  std::optional<std::size_t> stopped_at;     // index of the split met, if any
};

// Slides the merge event at merge_index rightward per the stop rule.
// stop_at_next_split cancels it against the first matching-position split;
// resolve_upper/lower pass it over/under that split and stop just past it;
// run_to_end pushes it off the right end.  Throws TrackError("E_BACKWARD")
// if another merge is in the way, TrackError("E_BAD_MOVE") on misuse.
IntervalSlideResult interval_trace_split(const TrainTrack& t,
                                         std::size_t merge_index,
                                         StopRule rule);

// .ttk serialization: header "topology start_count", then "S p" / "M p" lines.
TrainTrack parse_track(const std::string& text);
std::string serialize_track(const TrainTrack& t);

}  // namespace bsc

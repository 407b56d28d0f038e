#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pmagraph {

// Per-batch accounting shared by both batch engines. `rounds` counts
// level-rounds for the segment engine and retry sweeps for the lock engine.
struct UpdateStats {
    std::size_t batch_size = 0;
    std::size_t rounds = 0;
    std::uint64_t slot_writes = 0;
    std::uint64_t wall_ns = 0;
    std::uint64_t segment_phase_ns = 0;
    std::vector<std::size_t> segments_per_level;  // committed segments, indexed by level
    std::size_t grow_events = 0;
    std::size_t shrink_events = 0;
    std::size_t deletes_missed = 0;
    std::size_t tombstones_added = 0;
    // Slot intervals rewritten by the batch; empty + resized=true means the
    // whole array moved (grow/shrink) and callers must rescan everything.
    std::vector<std::pair<std::size_t, std::size_t>> touched_ranges;
    bool resized = false;

    static std::string csv_header() { return "batch_size,rounds,slot_writes,wall_ns"; }

    std::string csv_row() const {
        return std::to_string(batch_size) + "," + std::to_string(rounds) + "," +
               std::to_string(slot_writes) + "," + std::to_string(wall_ns);
    }
};

}  // namespace pmagraph

#pragma once

// Segment-oriented batch updates without locks: the batch is sorted once,
// grouped by target leaf segment, and the tree is processed level by level
// in bulk-synchronous rounds. Within a round every group owns a distinct
// same-size segment, so groups write pairwise-disjoint slot ranges and the
// final state is identical for any worker count.

#include <array>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pmagraph/pma.hpp"
#include "pmagraph/primitives.hpp"
#include "pmagraph/update_stats.hpp"
#include "pmagraph/worker_pool.hpp"

namespace pmagraph {

enum class UpdateOp : std::uint8_t { kInsert, kDelete };

struct Update {
    std::uint64_t key = 0;
    std::uint64_t value = 0;
    UpdateOp op = UpdateOp::kInsert;
};

// Lazy deletion tombstones the slot and waits for a later merge to reclaim
// it; eager deletion rebalances like the dual of insertion. Sliding windows,
// where insert and delete counts match, want lazy.
enum class DeletionMode { kLazy, kEager };

// Size-tiered merge dispatch: small segments merge through a stack buffer,
// medium ones through a reusable scratch vector, large ones in place
// (compact left, then merge right-to-left). All tiers produce identical
// slot arrays.
enum class MergeStrategy { kSmall, kMedium, kLarge };

struct MergeTiers {
    std::size_t small_max = 32;
    std::size_t medium_max = 1024;
};

inline MergeStrategy select_merge_strategy(std::size_t seg_size, const MergeTiers& tiers = {}) {
    if (seg_size <= tiers.small_max) return MergeStrategy::kSmall;
    if (seg_size <= tiers.medium_max) return MergeStrategy::kMedium;
    return MergeStrategy::kLarge;
}

struct SegmentEngineConfig {
    DeletionMode deletion_mode = DeletionMode::kLazy;
    unsigned workers = 1;
    MergeTiers tiers{};
    // Test hook: bypass size-tiered dispatch with a fixed strategy.
    std::optional<MergeStrategy> force_strategy;
};

// The sorted batch plus each entry's current target segment. Sorting happens
// once; the leaf-to-parent mapping keeps `segments` sorted round over round.
struct PendingUpdates {
    std::vector<Update> entries;
    std::vector<std::size_t> segments;
    int round_level = 0;
};

struct SegmentGroup {
    std::vector<std::size_t> unique_segments;
    std::vector<std::size_t> offsets;  // first update index per unique segment
    std::vector<std::size_t> counts;
};

// Groups sorted per-entry segment ids: run-length encoding yields the unique
// segments and run lengths, the exclusive scan their start offsets.
inline SegmentGroup unique_segments(std::span<const std::size_t> segs) {
    std::vector<std::uint64_t> as64(segs.begin(), segs.end());
    const RleResult rle = run_length_encode(as64);
    SegmentGroup group;
    group.unique_segments.assign(rle.unique_values.begin(), rle.unique_values.end());
    group.counts = rle.run_lengths;
    group.offsets = exclusive_scan(rle.run_lengths);
    return group;
}

// Drops committed groups and lifts the survivors' segment ids to their
// parents; duplicate parents merge at the next unique_segments call.
inline void advance_round(PendingUpdates& pending, const SegmentGroup& group,
                          std::span<const char> committed) {
    std::size_t w = 0;
    for (std::size_t g = 0; g < group.unique_segments.size(); ++g) {
        if (committed[g]) continue;
        for (std::size_t i = 0; i < group.counts[g]; ++i) {
            const std::size_t r = group.offsets[g] + i;
            pending.entries[w] = pending.entries[r];
            pending.segments[w] = pending.segments[r] >> 1;
            ++w;
        }
    }
    pending.entries.resize(w);
    pending.segments.resize(w);
    ++pending.round_level;
}

namespace detail {

struct GroupResult {
    bool committed = false;
    bool moved_slots = false;
    std::uint32_t deletes_missed = 0;
    std::uint32_t tombstones_added = 0;
};

// Merges sorted existing entries with a sorted update slice. Deletes consume
// matches, inserts overwrite matches or join unmatched; duplicate keys inside
// the slice were resolved before the rounds started.
inline void merge_entries(std::span<const Entry> existing, std::span<const Update> slice,
                          std::vector<Entry>& out, std::uint32_t& deletes_missed) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < existing.size() || j < slice.size()) {
        if (j == slice.size() || (i < existing.size() && existing[i].key < slice[j].key)) {
            out.push_back(existing[i++]);
            continue;
        }
        const Update& u = slice[j++];
        const bool match = i < existing.size() && existing[i].key == u.key;
        if (match) ++i;
        if (u.op == UpdateOp::kInsert) {
            out.push_back(Entry{u.key, u.value});
        } else if (!match) {
            ++deletes_missed;
        }
    }
}

inline constexpr std::size_t kStackScratch = 512;

// In-place commit for segments too large for scratch buffers. Pass A walks
// left compacting surviving entries (tombstones dropped, deletes applied);
// pass B merges the compacted run with the slice inserts right-to-left onto
// the evenly spread target slots. The write cursor never clobbers an unread
// slot: the remaining merged count always covers the remaining compacted run,
// so a write below the read frontier can only happen at the frontier itself.
inline GroupResult commit_in_place(PackedMemoryArray& pma, int level, std::size_t seg,
                                   std::span<const Update> slice) {
    GroupResult res;
    std::span<Slot> slots = pma.mutable_slots();
    const auto [b, e] = pma.seg_range(level, seg);
    std::uint64_t writes = 0;

    std::size_t w = b;
    std::size_t j = 0;
    std::size_t old_valid = 0;
    std::size_t old_tomb = 0;
    for (std::size_t i = b; i < e; ++i) {
        const Slot s = slots[i];
        if (s.state == SlotState::kTombstone) ++old_tomb;
        if (s.state != SlotState::kValid) continue;
        ++old_valid;
        bool keep = true;
        while (j < slice.size() && slice[j].key <= s.key) {
            if (slice[j].op == UpdateOp::kDelete) {
                if (slice[j].key == s.key) keep = false;
                else ++res.deletes_missed;
            }
            ++j;
        }
        if (!keep) continue;
        if (w != i) {
            slots[w] = s;
            ++writes;
        }
        ++w;
    }
    for (; j < slice.size(); ++j) {
        if (slice[j].op == UpdateOp::kDelete) ++res.deletes_missed;
    }

    // Merged size: compacted survivors plus slice inserts that do not
    // overwrite a survivor.
    const std::size_t n1 = w - b;
    std::size_t k = n1;
    {
        std::size_t p = b;
        for (const Update& u : slice) {
            if (u.op != UpdateOp::kInsert) continue;
            while (p < w && slots[p].key < u.key) ++p;
            if (p < w && slots[p].key == u.key) ++p;
            else ++k;
        }
    }

    const std::size_t m = e - b;
    assert(k <= m);
    std::ptrdiff_t p = static_cast<std::ptrdiff_t>(w) - 1;
    std::ptrdiff_t uj = static_cast<std::ptrdiff_t>(slice.size()) - 1;
    std::ptrdiff_t t = static_cast<std::ptrdiff_t>(k) - 1;
    const auto pb = static_cast<std::ptrdiff_t>(b);
    for (std::size_t s = e; s-- > b;) {
        const std::size_t target = t >= 0 ? b + static_cast<std::size_t>(t) * m / k : e;
        if (s != target) {
            slots[s] = Slot{};
            ++writes;
            continue;
        }
        Entry out{};
        while (true) {
            while (uj >= 0 && slice[uj].op == UpdateOp::kDelete) --uj;  // hits applied in pass A
            if (uj < 0 || (p >= pb && slots[p].key > slice[uj].key)) {
                out = Entry{slots[p].key, slots[p].value};
                --p;
                break;
            }
            if (p >= pb && slots[p].key == slice[uj].key) --p;  // overwritten
            out = Entry{slice[uj].key, slice[uj].value};
            --uj;
            break;
        }
        slots[s] = Slot{out.key, out.value, SlotState::kValid};
        ++writes;
        --t;
    }
    pma.account_rewrite(k, old_valid, old_tomb, writes);
    res.committed = true;
    res.moved_slots = true;
    return res;
}

inline GroupResult commit_with_scratch(PackedMemoryArray& pma, int level, std::size_t seg,
                                       std::span<const Update> slice, MergeStrategy strategy) {
    GroupResult res;
    const auto [b, e] = pma.seg_range(level, seg);
    if (strategy == MergeStrategy::kSmall && e - b <= kStackScratch) {
        std::array<Entry, kStackScratch> existing;
        std::array<Entry, kStackScratch> merged;
        std::size_t n = 0;
        for (std::size_t i = b; i < e; ++i) {
            const Slot& s = pma.slots()[i];
            if (s.state == SlotState::kValid) existing[n++] = Entry{s.key, s.value};
        }
        std::size_t k = 0;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < n || j < slice.size()) {
            if (j == slice.size() || (i < n && existing[i].key < slice[j].key)) {
                merged[k++] = existing[i++];
                continue;
            }
            const Update& u = slice[j++];
            const bool match = i < n && existing[i].key == u.key;
            if (match) ++i;
            if (u.op == UpdateOp::kInsert) merged[k++] = Entry{u.key, u.value};
            else if (!match) ++res.deletes_missed;
        }
        pma.place_evenly(level, seg, std::span<const Entry>(merged.data(), k));
    } else {
        thread_local std::vector<Entry> existing_tl;
        thread_local std::vector<Entry> merged_tl;
        existing_tl.clear();
        merged_tl.clear();
        pma.collect_valid(b, e, existing_tl);
        merge_entries(existing_tl, slice, merged_tl, res.deletes_missed);
        pma.place_evenly(level, seg, merged_tl);
    }
    res.committed = true;
    res.moved_slots = true;
    return res;
}

inline GroupResult commit_merge(PackedMemoryArray& pma, int level, std::size_t seg,
                                std::span<const Update> slice, const SegmentEngineConfig& cfg) {
    const std::size_t seg_size = pma.layout().seg_size(level);
    const MergeStrategy strategy =
        cfg.force_strategy.value_or(select_merge_strategy(seg_size, cfg.tiers));
    if (strategy == MergeStrategy::kLarge) return commit_in_place(pma, level, seg, slice);
    return commit_with_scratch(pma, level, seg, slice, strategy);
}

// Lazy deletes-only slice: tombstone the hits in one pass over the segment.
// No density check and no re-dispatch; the next merge over these slots
// reclaims them.
inline GroupResult commit_tombstones(PackedMemoryArray& pma, int level, std::size_t seg,
                                     std::span<const Update> slice) {
    GroupResult res;
    const auto [b, e] = pma.seg_range(level, seg);
    std::size_t j = 0;
    for (std::size_t i = b; i < e && j < slice.size(); ++i) {
        const Slot& s = pma.slots()[i];
        if (s.state == SlotState::kEmpty) continue;
        while (j < slice.size() && slice[j].key < s.key) {
            ++res.deletes_missed;
            ++j;
        }
        if (j < slice.size() && slice[j].key == s.key) {
            if (s.state == SlotState::kValid) {
                pma.mark_tombstone_at(i);
                ++res.tombstones_added;
            } else {
                ++res.deletes_missed;
            }
            ++j;
        }
    }
    res.deletes_missed += static_cast<std::uint32_t>(slice.size() - j);
    res.committed = true;
    return res;
}

}  // namespace detail

enum class TryOutcome : std::uint8_t { kCommitted, kDeferred };

// Decides and, when the density bounds allow, applies one group's updates to
// its segment. Deferred leaves the segment untouched; the group escalates
// with its parent next round. The density check uses the batch counts, not
// the post-merge count, so overwrites are counted pessimistically.
inline TryOutcome try_insert_plus(PackedMemoryArray& pma, int level, std::size_t seg,
                                  std::span<const Update> slice, const SegmentEngineConfig& cfg,
                                  detail::GroupResult& result) {
    std::size_t inserts = 0;
    for (const Update& u : slice) inserts += u.op == UpdateOp::kInsert;
    const std::size_t deletes = slice.size() - inserts;

    if (cfg.deletion_mode == DeletionMode::kLazy && inserts == 0) {
        result = detail::commit_tombstones(pma, level, seg, slice);
        return TryOutcome::kCommitted;
    }

    const auto [b, e] = pma.seg_range(level, seg);
    const std::size_t n = pma.count_valid_in(b, e);
    if (n + inserts > pma.max_entries(level)) return TryOutcome::kDeferred;
    if (cfg.deletion_mode == DeletionMode::kEager && pma.capacity() > PackedMemoryArray::kMinCapacity &&
        n < deletes + pma.min_entries(level)) {
        return TryOutcome::kDeferred;
    }
    result = detail::commit_merge(pma, level, seg, slice, cfg);
    return TryOutcome::kCommitted;
}

// Resolves duplicate keys inside one sorted batch: any insert present makes
// the key end up present with the last insert's value; deletes-only makes it
// absent. In particular delete+insert of one key nets to present.
inline void resolve_duplicates(std::vector<Update>& sorted) {
    std::size_t w = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        Update effective{sorted[i].key, 0, UpdateOp::kDelete};
        while (j < sorted.size() && sorted[j].key == sorted[i].key) {
            if (sorted[j].op == UpdateOp::kInsert) {
                effective.value = sorted[j].value;
                effective.op = UpdateOp::kInsert;
            }
            ++j;
        }
        sorted[w++] = effective;
        i = j;
    }
    sorted.resize(w);
}

inline UpdateStats batch_update(PackedMemoryArray& pma, std::vector<Update> updates,
                                const SegmentEngineConfig& cfg = {}, WorkerPool* pool = nullptr) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    UpdateStats stats;
    stats.batch_size = updates.size();
    stats.segments_per_level.assign(static_cast<std::size_t>(pma.layout().height()) + 1, 0);
    if (updates.empty()) return stats;

    std::optional<WorkerPool> local_pool;
    if (pool == nullptr) {
        local_pool.emplace(cfg.workers);
        pool = &*local_pool;
    }

    sort_by_key(updates, [](const Update& u) { return u.key; });
    resolve_duplicates(updates);

    const std::uint64_t writes_base = pma.slot_writes();

    PendingUpdates pending;
    pending.entries = std::move(updates);
    pending.segments.resize(pending.entries.size());
    {
        std::vector<std::uint64_t> keys(pending.entries.size());
        for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = pending.entries[i].key;
        pma.assign_leaves_sorted(keys, pending.segments);
    }

    std::vector<detail::GroupResult> results;
    std::vector<char> committed;
    while (true) {
        const int level = pending.round_level;
        const SegmentGroup group = unique_segments(pending.segments);
        const std::size_t ngroups = group.unique_segments.size();
#ifndef NDEBUG
        for (std::size_t g = 1; g < ngroups; ++g) {
            assert(group.unique_segments[g - 1] < group.unique_segments[g] &&
                   "round segments must be pairwise disjoint");
        }
#endif
        results.assign(ngroups, {});
        committed.assign(ngroups, false);
        const auto tp0 = Clock::now();
        pool->run(ngroups, [&](std::size_t g) {
            const std::span<const Update> slice(pending.entries.data() + group.offsets[g],
                                                group.counts[g]);
            committed[g] = try_insert_plus(pma, level, group.unique_segments[g], slice, cfg,
                                           results[g]) == TryOutcome::kCommitted;
        });
        stats.segment_phase_ns +=
            static_cast<std::uint64_t>(std::chrono::nanoseconds(Clock::now() - tp0).count());
        ++stats.rounds;

        bool any_left = false;
        for (std::size_t g = 0; g < ngroups; ++g) {
            if (!committed[g]) {
                any_left = true;
                continue;
            }
            stats.segments_per_level[static_cast<std::size_t>(level)]++;
            stats.deletes_missed += results[g].deletes_missed;
            stats.tombstones_added += results[g].tombstones_added;
            if (results[g].moved_slots) {
                const auto [rb, re] = pma.seg_range(level, group.unique_segments[g]);
                stats.touched_ranges.emplace_back(rb, re);
            }
        }
        if (!any_left) break;

        if (level == pma.layout().height()) {
            // Everything left forms the single root group: grow until the
            // batch bound fits, force the merge, then let eager mode shrink.
            std::size_t root_group = ngroups;
            for (std::size_t g = 0; g < ngroups; ++g) {
                if (!committed[g]) {
                    root_group = g;
                    break;
                }
            }
            const std::span<const Update> slice(pending.entries.data() + group.offsets[root_group],
                                                group.counts[root_group]);
            std::size_t inserts = 0;
            for (const Update& u : slice) inserts += u.op == UpdateOp::kInsert;
            while (pma.valid_count() + inserts > pma.max_entries(pma.layout().height())) {
                pma.grow_root();
                ++stats.grow_events;
            }
            detail::GroupResult res =
                detail::commit_merge(pma, pma.layout().height(), 0, slice, cfg);
            stats.deletes_missed += res.deletes_missed;
            stats.segments_per_level.resize(static_cast<std::size_t>(pma.layout().height()) + 1, 0);
            stats.segments_per_level.back()++;
            ++stats.rounds;
            if (cfg.deletion_mode == DeletionMode::kEager && pma.shrink_root()) ++stats.shrink_events;
            stats.resized = stats.grow_events > 0 || stats.shrink_events > 0;
            if (!stats.resized) stats.touched_ranges.emplace_back(0, pma.capacity());
            break;
        }
        advance_round(pending, group, committed);
    }

    stats.slot_writes = pma.slot_writes() - writes_base;
    stats.wall_ns = static_cast<std::uint64_t>(std::chrono::nanoseconds(Clock::now() - t0).count());
    return stats;
}

}  // namespace pmagraph

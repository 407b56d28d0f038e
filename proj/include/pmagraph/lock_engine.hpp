#pragma once

// Lock-based concurrent batch updates: one logical worker per update entry,
// per-segment try-locks, level-synchronized rounds, and an outer retry sweep
// until the batch is empty. A worker that loses a lock aborts for the rest of
// its sweep; a worker whose segment cannot take the update escalates to the
// parent segment in the next level round. A lock expires at the level
// synchronization point.
//
// This engine exists for fidelity and for the conflict-rate comparison with
// the segment-oriented engine; its contract is the final valid set, which is
// independent of lock outcomes and worker count.

#include <atomic>
#include <barrier>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <thread>
#include <vector>

#include "pmagraph/pma.hpp"
#include "pmagraph/segment_engine.hpp"
#include "pmagraph/update_stats.hpp"

namespace pmagraph {

// One try-lock per segment id. A segment is locked for round `tag` when its
// flag holds that tag; stale tags from earlier rounds count as unlocked, so
// locks need no release pass.
class LockTable {
public:
    explicit LockTable(std::size_t segments) { resize(segments); }

    void resize(std::size_t segments) {
        if (segments <= flags_.size()) return;
        flags_ = std::vector<std::atomic<std::uint64_t>>(segments);
        for (auto& f : flags_) f.store(0, std::memory_order_relaxed);
    }

    bool try_lock(std::size_t seg, std::uint64_t tag) {
        std::atomic<std::uint64_t>& f = flags_[seg];
        std::uint64_t cur = f.load(std::memory_order_relaxed);
        while (cur != tag) {
            if (f.compare_exchange_weak(cur, tag, std::memory_order_acq_rel)) return true;
        }
        return false;
    }

private:
    std::vector<std::atomic<std::uint64_t>> flags_;
};

struct LockEngineConfig {
    unsigned workers = 1;
};

enum class LockTryOutcome : std::uint8_t { kSucceeded, kAborted, kEscalate };

namespace detail {

struct LockEntryState {
    std::size_t leaf = 0;
    std::size_t overwrite_slot = SIZE_MAX;  // present-key inserts patch in place
    std::size_t touched_begin = 0;
    std::size_t touched_end = 0;
    int level = 0;
    std::uint8_t done = 0;
    std::uint8_t aborted = 0;
    std::uint8_t missed = 0;
    std::uint8_t grew = 0;
    std::uint8_t shrunk = 0;
};

inline void lock_commit_insert(PackedMemoryArray& pma, int level, std::size_t seg, const Update& u) {
    const auto [b, e] = pma.seg_range(level, seg);
    thread_local std::vector<Entry> buf;
    buf.clear();
    pma.collect_valid(b, e, buf);
    const auto pos = std::lower_bound(buf.begin(), buf.end(), u.key,
                                      [](const Entry& a, std::uint64_t k) { return a.key < k; });
    buf.insert(pos, Entry{u.key, u.value});
    pma.place_evenly(level, seg, buf);
}

inline void lock_commit_delete(PackedMemoryArray& pma, int level, std::size_t seg, std::uint64_t key) {
    const auto [b, e] = pma.seg_range(level, seg);
    thread_local std::vector<Entry> buf;
    buf.clear();
    pma.collect_valid(b, e, buf);
    const auto pos = std::lower_bound(buf.begin(), buf.end(), key,
                                      [](const Entry& a, std::uint64_t k) { return a.key < k; });
    if (pos != buf.end() && pos->key == key) buf.erase(pos);
    pma.place_evenly(level, seg, buf);
}

}  // namespace detail

// One worker's step for one level round: try-lock the segment, check the
// density bound for the entry's op, then merge and re-dispatch evenly or
// escalate to the parent.
inline LockTryOutcome lock_try_insert(PackedMemoryArray& pma, LockTable& locks, std::uint64_t tag,
                                      int level, std::size_t leaf, const Update& u) {
    const std::size_t seg = leaf >> level;
    if (!locks.try_lock(seg, tag)) return LockTryOutcome::kAborted;
    const auto [b, e] = pma.seg_range(level, seg);
    const std::size_t n = pma.count_valid_in(b, e);
    if (u.op == UpdateOp::kInsert) {
        if (n + 1 > pma.max_entries(level)) return LockTryOutcome::kEscalate;
        detail::lock_commit_insert(pma, level, seg, u);
        return LockTryOutcome::kSucceeded;
    }
    const bool bottom_ok = n >= 1 + pma.min_entries(level) ||
                           pma.capacity() == PackedMemoryArray::kMinCapacity ||
                           (!pma.profile().allow_shrink && level == pma.layout().height());
    if (!bottom_ok) return LockTryOutcome::kEscalate;
    detail::lock_commit_delete(pma, level, seg, u.key);
    return LockTryOutcome::kSucceeded;
}

// Applies a mixed batch with the retry-sweep protocol. stats.rounds counts
// outer sweeps; every sweep commits at least one entry (each contended
// segment has a lock winner, and the winner chain ends at the root, which
// either fits or resizes), so the loop terminates.
inline UpdateStats batch_update_lockbased(PackedMemoryArray& pma, std::vector<Update> updates,
                                          const LockEngineConfig& cfg = {}) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    UpdateStats stats;
    stats.batch_size = updates.size();
    if (updates.empty()) return stats;

    sort_by_key(updates, [](const Update& u) { return u.key; });
    resolve_duplicates(updates);
    const std::uint64_t writes_base = pma.slot_writes();

    const std::size_t n = updates.size();
    std::vector<detail::LockEntryState> state(n);
    LockTable locks(pma.layout().num_leaves());

    const unsigned workers = std::max(1u, cfg.workers);
    std::atomic<std::size_t> remaining{n};
    std::atomic<int> sweep_height{0};
    std::atomic<std::uint64_t> sweep_index{0};
    std::atomic<bool> done{false};
    std::barrier<> sync(static_cast<std::ptrdiff_t>(workers));
    std::atomic<int> round_level{-1};
    std::size_t sweeps = 0;

    auto worker_body = [&](unsigned w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        while (true) {
            if (w == 0) {
                if (remaining.load(std::memory_order_relaxed) == 0) {
                    done.store(true, std::memory_order_release);
                } else {
                    ++sweeps;
                    sweep_index.fetch_add(1, std::memory_order_relaxed);
                    locks.resize(pma.layout().num_leaves());
                    sweep_height.store(pma.layout().height(), std::memory_order_release);
                }
            }
            sync.arrive_and_wait();
            if (done.load(std::memory_order_acquire)) return;

            // All whole-array reads (leaf search, existence probes) happen
            // here, before any segment is rewritten this sweep.
            for (std::size_t i = lo; i < hi; ++i) {
                detail::LockEntryState& st = state[i];
                if (st.done) continue;
                st.aborted = 0;
                st.level = 0;
                st.overwrite_slot = SIZE_MAX;
                const auto slot = pma.find_slot(updates[i].key);
                const bool present =
                    slot.has_value() && pma.slots()[*slot].state == SlotState::kValid;
                if (updates[i].op == UpdateOp::kDelete && !present) {
                    st.done = 1;
                    st.missed = 1;
                    remaining.fetch_sub(1, std::memory_order_relaxed);
                    continue;
                }
                if (updates[i].op == UpdateOp::kInsert && slot.has_value()) {
                    st.overwrite_slot = *slot;
                }
                st.leaf = pma.binary_search_leaf(updates[i].key);
            }
            sync.arrive_and_wait();

            const int height = sweep_height.load(std::memory_order_acquire);
            const std::uint64_t sweep = sweep_index.load(std::memory_order_relaxed);
            for (int lvl = 0; lvl <= height; ++lvl) {
                if (w == 0) round_level.store(lvl, std::memory_order_relaxed);
                sync.arrive_and_wait();
                assert(round_level.load(std::memory_order_relaxed) == lvl);
                const std::uint64_t tag = sweep * 64 + static_cast<std::uint64_t>(lvl) + 1;
                for (std::size_t i = lo; i < hi; ++i) {
                    detail::LockEntryState& st = state[i];
                    if (st.done || st.aborted || st.level != lvl) continue;
                    const Update& u = updates[i];
                    if (lvl == 0 && st.overwrite_slot != SIZE_MAX) {
                        // Present key: value overwrite in place, no structural
                        // change. The leaf lock keeps peers out of this leaf,
                        // so the pre-phase slot index is still good.
                        if (!locks.try_lock(st.leaf, tag)) {
                            st.aborted = 1;
                            continue;
                        }
                        pma.overwrite_slot(st.overwrite_slot, u.value);
                        st.touched_begin = st.touched_end = 0;
                        st.done = 1;
                        remaining.fetch_sub(1, std::memory_order_relaxed);
                        continue;
                    }
                    if (lvl == height) {
                        const std::size_t seg = 0;
                        if (!locks.try_lock(seg, tag)) {
                            st.aborted = 1;
                            continue;
                        }
                        const auto [b, e] = pma.seg_range(lvl, seg);
                        const std::size_t cnt = pma.count_valid_in(b, e);
                        if (u.op == UpdateOp::kInsert) {
                            if (cnt + 1 <= pma.max_entries(lvl)) {
                                detail::lock_commit_insert(pma, lvl, seg, u);
                            } else {
                                // Root lock holder doubles the space; the
                                // sequential path regrows until it fits.
                                pma.insert(u.key, u.value);
                                st.grew = 1;
                            }
                        } else {
                            const bool fits = cnt >= 1 + pma.min_entries(lvl) ||
                                              pma.capacity() == PackedMemoryArray::kMinCapacity ||
                                              !pma.profile().allow_shrink;
                            if (fits) {
                                detail::lock_commit_delete(pma, lvl, seg, u.key);
                            } else {
                                pma.erase(u.key);
                                st.shrunk = 1;
                            }
                        }
                        st.touched_begin = 0;
                        st.touched_end = st.grew || st.shrunk ? 0 : pma.capacity();
                        st.done = 1;
                        remaining.fetch_sub(1, std::memory_order_relaxed);
                        continue;
                    }
                    switch (lock_try_insert(pma, locks, tag, lvl, st.leaf, u)) {
                        case LockTryOutcome::kAborted:
                            st.aborted = 1;
                            break;
                        case LockTryOutcome::kEscalate:
                            st.level = lvl + 1;
                            break;
                        case LockTryOutcome::kSucceeded: {
                            const auto [b, e] = pma.seg_range(lvl, st.leaf >> lvl);
                            st.touched_begin = b;
                            st.touched_end = e;
                            st.done = 1;
                            remaining.fetch_sub(1, std::memory_order_relaxed);
                            break;
                        }
                    }
                }
                sync.arrive_and_wait();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) threads.emplace_back(worker_body, w);
    worker_body(0);
    for (auto& t : threads) t.join();

    stats.rounds = sweeps;
    for (const detail::LockEntryState& st : state) {
        stats.deletes_missed += st.missed;
        stats.grow_events += st.grew;
        stats.shrink_events += st.shrunk;
        if (st.touched_end > st.touched_begin) {
            stats.touched_ranges.emplace_back(st.touched_begin, st.touched_end);
        }
    }
    stats.resized = stats.grow_events > 0 || stats.shrink_events > 0;
    stats.slot_writes = pma.slot_writes() - writes_base;
    stats.wall_ns = static_cast<std::uint64_t>(std::chrono::nanoseconds(Clock::now() - t0).count());
    return stats;
}

}  // namespace pmagraph

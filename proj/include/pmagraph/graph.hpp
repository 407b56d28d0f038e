#pragma once

// CSR-compatible dynamic graph on the packed memory array. Edges pack into
// 64-bit keys (source in the high half, destination in the low half) so
// integer key order is row-major CSR order; every row ends with a guard
// entry at the reserved destination, and a row-offset array indexed off the
// guard positions gives each vertex a slot interval to scan.

#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmagraph/lock_engine.hpp"
#include "pmagraph/pma.hpp"
#include "pmagraph/primitives.hpp"
#include "pmagraph/segment_engine.hpp"
#include "pmagraph/update_stats.hpp"

namespace pmagraph {

using VertexId = std::uint32_t;

struct EdgeKey {
    static constexpr VertexId kGuardDst = std::numeric_limits<VertexId>::max();

    static std::uint64_t pack(VertexId src, VertexId dst) {
        return (static_cast<std::uint64_t>(src) << 32) | dst;
    }
    static VertexId src_of(std::uint64_t key) { return static_cast<VertexId>(key >> 32); }
    static VertexId dst_of(std::uint64_t key) { return static_cast<VertexId>(key & 0xffffffffu); }
    static std::uint64_t guard(VertexId src) { return pack(src, kGuardDst); }
    static bool is_guard(std::uint64_t key) { return dst_of(key) == kGuardDst; }
};

struct WeightedEdge {
    VertexId src = 0;
    VertexId dst = 0;
    double weight = 1.0;
};

// Gap-free CSR arrays; the oracle input for the analytics.
struct CsrSnapshot {
    std::vector<std::size_t> row_offsets;
    std::vector<VertexId> col_indices;
    std::vector<double> values;
};

enum class UpdateEngine { kSegment, kLock };

struct GraphConfig {
    UpdateEngine engine = UpdateEngine::kSegment;
    DeletionMode deletion_mode = DeletionMode::kLazy;
    unsigned workers = 1;
    double fill_target = 0.5;
    DensityProfile profile{};
};

class DynamicGraph {
public:
    // Seeds the array with every edge key plus one guard per vertex.
    // Duplicate (src, dst) pairs collapse to the last weight.
    static DynamicGraph from_edges(std::size_t num_vertices, std::span<const WeightedEdge> edges,
                                   GraphConfig config = {}) {
        if (num_vertices >= EdgeKey::kGuardDst) {
            throw std::invalid_argument("from_edges: vertex count exceeds the id space");
        }
        DynamicGraph g(num_vertices, config);
        std::vector<Entry> keyed;
        keyed.reserve(edges.size() + num_vertices);
        for (const WeightedEdge& e : edges) {
            g.check_ids(e.src, e.dst);
            keyed.push_back(Entry{EdgeKey::pack(e.src, e.dst), std::bit_cast<std::uint64_t>(e.weight)});
        }
        sort_by_key(keyed, [](const Entry& e) { return e.key; });
        std::size_t w = 0;
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            if (i + 1 < keyed.size() && keyed[i + 1].key == keyed[i].key) continue;  // last wins
            keyed[w++] = keyed[i];
        }
        keyed.resize(w);
        for (VertexId v = 0; v < num_vertices; ++v) {
            keyed.push_back(Entry{EdgeKey::guard(v), 0});
        }
        sort_by_key(keyed, [](const Entry& e) { return e.key; });
        g.pma_ = PackedMemoryArray::from_sorted(keyed, config.fill_target, config.profile);
        g.rebuild_row_offsets();
        return g;
    }

    std::size_t num_vertices() const { return num_vertices_; }
    std::size_t num_edges() const { return pma_.valid_count() - num_vertices_; }
    const PackedMemoryArray& pma() const { return pma_; }
    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }

    // True for slots the analytics should read: valid and not a guard.
    bool is_entry_exist(std::size_t slot) const {
        const Slot& s = pma_.slots()[slot];
        return s.state == SlotState::kValid && !EdgeKey::is_guard(s.key);
    }

    template <typename Fn>
    void for_each_neighbor(VertexId v, Fn&& fn) const {
        const std::size_t begin = row_offsets_[v];
        const std::size_t end = row_offsets_[v + 1];
        for (std::size_t i = begin; i < end; ++i) {
            if (!is_entry_exist(i)) continue;
            const Slot& s = pma_.slots()[i];
            fn(EdgeKey::dst_of(s.key), std::bit_cast<double>(s.value));
        }
    }

    std::size_t degree(VertexId v) const {
        std::size_t d = 0;
        for_each_neighbor(v, [&](VertexId, double) { ++d; });
        return d;
    }

    std::optional<double> edge_weight(VertexId src, VertexId dst) const {
        const auto v = pma_.search(EdgeKey::pack(src, dst));
        if (!v.has_value()) return std::nullopt;
        return std::bit_cast<double>(*v);
    }

    // Applies one batch through the configured engine. Guards are never
    // deleted; deletes of absent edges are counted and ignored.
    UpdateStats apply_batch(std::span<const WeightedEdge> inserts,
                            std::span<const std::pair<VertexId, VertexId>> deletes,
                            WorkerPool* pool = nullptr) {
        std::vector<Update> updates;
        updates.reserve(inserts.size() + deletes.size());
        for (const WeightedEdge& e : inserts) {
            check_ids(e.src, e.dst);
            updates.push_back(Update{EdgeKey::pack(e.src, e.dst),
                                     std::bit_cast<std::uint64_t>(e.weight), UpdateOp::kInsert});
        }
        std::size_t guard_deletes = 0;
        for (const auto& [src, dst] : deletes) {
            if (dst == EdgeKey::kGuardDst) {
                ++guard_deletes;
                continue;
            }
            updates.push_back(Update{EdgeKey::pack(src, dst), 0, UpdateOp::kDelete});
        }
        UpdateStats stats;
        if (config_.engine == UpdateEngine::kSegment) {
            SegmentEngineConfig ecfg;
            ecfg.deletion_mode = config_.deletion_mode;
            ecfg.workers = config_.workers;
            stats = batch_update(pma_, std::move(updates), ecfg, pool);
        } else {
            LockEngineConfig ecfg;
            ecfg.workers = config_.workers;
            stats = batch_update_lockbased(pma_, std::move(updates), ecfg);
        }
        stats.deletes_missed += guard_deletes;
        refresh_row_offsets(stats);
        return stats;
    }

    // Incremental row-offset maintenance: only re-dispatched slot ranges can
    // move guards, so scanning them finds every offset that changed. A
    // resize moves everything and forces the full rebuild.
    void refresh_row_offsets(const UpdateStats& stats) {
        if (stats.resized || row_offsets_.size() != num_vertices_ + 1) {
            rebuild_row_offsets();
            return;
        }
        for (const auto& [begin, end] : stats.touched_ranges) {
            for (std::size_t i = begin; i < end; ++i) {
                const Slot& s = pma_.slots()[i];
                if (s.state == SlotState::kValid && EdgeKey::is_guard(s.key)) {
                    row_offsets_[EdgeKey::src_of(s.key) + 1] = i + 1;
                }
            }
        }
    }

    void rebuild_row_offsets() {
        row_offsets_.assign(num_vertices_ + 1, 0);
        const auto& slots = pma_.slots();
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].state == SlotState::kValid && EdgeKey::is_guard(slots[i].key)) {
                row_offsets_[EdgeKey::src_of(slots[i].key) + 1] = i + 1;
            }
        }
    }

    CsrSnapshot csr_snapshot() const {
        CsrSnapshot snap;
        std::vector<std::size_t> counts(num_vertices_, 0);
        snap.col_indices.reserve(num_edges());
        snap.values.reserve(num_edges());
        pma_.for_each_valid([&](std::uint64_t key, std::uint64_t value) {
            if (EdgeKey::is_guard(key)) return;
            counts[EdgeKey::src_of(key)]++;
            snap.col_indices.push_back(EdgeKey::dst_of(key));
            snap.values.push_back(std::bit_cast<double>(value));
        });
        snap.row_offsets = exclusive_scan(counts);
        snap.row_offsets.push_back(snap.col_indices.size());
        return snap;
    }

    std::vector<WeightedEdge> edge_list() const {
        std::vector<WeightedEdge> out;
        out.reserve(num_edges());
        pma_.for_each_valid([&](std::uint64_t key, std::uint64_t value) {
            if (EdgeKey::is_guard(key)) return;
            out.push_back(WeightedEdge{EdgeKey::src_of(key), EdgeKey::dst_of(key),
                                       std::bit_cast<double>(value)});
        });
        return out;
    }

    std::size_t guard_count() const {
        std::size_t n = 0;
        pma_.for_each_valid([&](std::uint64_t key, std::uint64_t) { n += EdgeKey::is_guard(key); });
        return n;
    }

private:
    DynamicGraph(std::size_t num_vertices, GraphConfig config)
        : num_vertices_(num_vertices), config_(config), pma_(config.profile) {}

    void check_ids(VertexId src, VertexId dst) const {
        if (src >= num_vertices_ || dst >= num_vertices_) {
            throw std::invalid_argument("edge (" + std::to_string(src) + ", " + std::to_string(dst) +
                                        ") outside vertex range " + std::to_string(num_vertices_));
        }
    }

    std::size_t num_vertices_ = 0;
    GraphConfig config_{};
    PackedMemoryArray pma_;
    std::vector<std::size_t> row_offsets_;
};

// Read-only graph view over compact CSR arrays; lets the analytics run on a
// snapshot through the same interface as the live graph.
class CsrView {
public:
    explicit CsrView(const CsrSnapshot& snap)
        : snap_(&snap) {}

    std::size_t num_vertices() const { return snap_->row_offsets.size() - 1; }

    template <typename Fn>
    void for_each_neighbor(VertexId v, Fn&& fn) const {
        for (std::size_t i = snap_->row_offsets[v]; i < snap_->row_offsets[v + 1]; ++i) {
            fn(snap_->col_indices[i], snap_->values[i]);
        }
    }

private:
    const CsrSnapshot* snap_;
};

}  // namespace pmagraph

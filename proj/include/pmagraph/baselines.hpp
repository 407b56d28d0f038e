#pragma once

// Baseline graph containers for the benchmarks, with the same batch/neighbor
// semantics as the PMA-backed graph: per-vertex balanced ordered trees, and
// a compact CSR rebuilt from a sorted edge set on every batch.

#include <chrono>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "pmagraph/graph.hpp"
#include "pmagraph/update_stats.hpp"

namespace pmagraph {

// One red-black tree per vertex row; updates are plain tree inserts/erases.
class AdjListsGraph {
public:
    AdjListsGraph(std::size_t num_vertices, std::span<const WeightedEdge> edges)
        : rows_(num_vertices) {
        for (const WeightedEdge& e : edges) insert(e);
    }

    std::size_t num_vertices() const { return rows_.size(); }

    std::size_t num_edges() const {
        std::size_t n = 0;
        for (const auto& row : rows_) n += row.size();
        return n;
    }

    template <typename Fn>
    void for_each_neighbor(VertexId v, Fn&& fn) const {
        for (const auto& [dst, w] : rows_[v]) fn(dst, w);
    }

    UpdateStats apply_batch(std::span<const WeightedEdge> inserts,
                            std::span<const std::pair<VertexId, VertexId>> deletes) {
        using Clock = std::chrono::steady_clock;
        const auto t0 = Clock::now();
        UpdateStats stats;
        stats.batch_size = inserts.size() + deletes.size();
        for (const auto& [src, dst] : deletes) {
            if (rows_[src].erase(dst) == 0) ++stats.deletes_missed;
            ++stats.slot_writes;
        }
        for (const WeightedEdge& e : inserts) {
            rows_[e.src][e.dst] = e.weight;
            ++stats.slot_writes;
        }
        stats.wall_ns = static_cast<std::uint64_t>(std::chrono::nanoseconds(Clock::now() - t0).count());
        return stats;
    }

    CsrSnapshot csr_snapshot() const {
        CsrSnapshot snap;
        snap.row_offsets.reserve(rows_.size() + 1);
        snap.row_offsets.push_back(0);
        for (const auto& row : rows_) {
            for (const auto& [dst, w] : row) {
                snap.col_indices.push_back(dst);
                snap.values.push_back(w);
            }
            snap.row_offsets.push_back(snap.col_indices.size());
        }
        return snap;
    }

private:
    void insert(const WeightedEdge& e) {
        if (e.src >= rows_.size() || e.dst >= rows_.size()) {
            throw std::invalid_argument("AdjListsGraph: vertex id out of range");
        }
        rows_[e.src][e.dst] = e.weight;
    }

    std::vector<std::map<VertexId, double>> rows_;
};

// Sorted edge set plus compact CSR arrays rebuilt from scratch after every
// batch; slot_writes counts the rebuilt entries plus the offset array.
class RebuildCsrGraph {
public:
    RebuildCsrGraph(std::size_t num_vertices, std::span<const WeightedEdge> edges)
        : num_vertices_(num_vertices) {
        edges_.reserve(edges.size());
        for (const WeightedEdge& e : edges) {
            if (e.src >= num_vertices_ || e.dst >= num_vertices_) {
                throw std::invalid_argument("RebuildCsrGraph: vertex id out of range");
            }
            edges_.push_back(Entry{EdgeKey::pack(e.src, e.dst), std::bit_cast<std::uint64_t>(e.weight)});
        }
        sort_by_key(edges_, [](const Entry& e) { return e.key; });
        dedupe_last_wins();
        rebuild();
    }

    std::size_t num_vertices() const { return num_vertices_; }
    std::size_t num_edges() const { return edges_.size(); }

    template <typename Fn>
    void for_each_neighbor(VertexId v, Fn&& fn) const {
        for (std::size_t i = snap_.row_offsets[v]; i < snap_.row_offsets[v + 1]; ++i) {
            fn(snap_.col_indices[i], snap_.values[i]);
        }
    }

    UpdateStats apply_batch(std::span<const WeightedEdge> inserts,
                            std::span<const std::pair<VertexId, VertexId>> deletes) {
        using Clock = std::chrono::steady_clock;
        const auto t0 = Clock::now();
        UpdateStats stats;
        stats.batch_size = inserts.size() + deletes.size();

        std::vector<Update> updates;
        updates.reserve(inserts.size() + deletes.size());
        for (const WeightedEdge& e : inserts) {
            updates.push_back(Update{EdgeKey::pack(e.src, e.dst),
                                     std::bit_cast<std::uint64_t>(e.weight), UpdateOp::kInsert});
        }
        for (const auto& [src, dst] : deletes) {
            updates.push_back(Update{EdgeKey::pack(src, dst), 0, UpdateOp::kDelete});
        }
        sort_by_key(updates, [](const Update& u) { return u.key; });
        resolve_duplicates(updates);

        std::vector<Entry> merged;
        merged.reserve(edges_.size() + updates.size());
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < edges_.size() || j < updates.size()) {
            if (j == updates.size() || (i < edges_.size() && edges_[i].key < updates[j].key)) {
                merged.push_back(edges_[i++]);
                continue;
            }
            const Update& u = updates[j++];
            const bool match = i < edges_.size() && edges_[i].key == u.key;
            if (match) ++i;
            if (u.op == UpdateOp::kInsert) merged.push_back(Entry{u.key, u.value});
            else if (!match) ++stats.deletes_missed;
        }
        edges_.swap(merged);
        rebuild();
        stats.slot_writes = 2 * edges_.size() + num_vertices_ + 1;
        stats.wall_ns = static_cast<std::uint64_t>(std::chrono::nanoseconds(Clock::now() - t0).count());
        return stats;
    }

    const CsrSnapshot& csr() const { return snap_; }
    CsrSnapshot csr_snapshot() const { return snap_; }

private:
    void dedupe_last_wins() {
        std::size_t w = 0;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (i + 1 < edges_.size() && edges_[i + 1].key == edges_[i].key) continue;
            edges_[w++] = edges_[i];
        }
        edges_.resize(w);
    }

    void rebuild() {
        std::vector<std::size_t> counts(num_vertices_, 0);
        for (const Entry& e : edges_) counts[EdgeKey::src_of(e.key)]++;
        snap_.row_offsets = exclusive_scan(counts);
        snap_.row_offsets.push_back(edges_.size());
        snap_.col_indices.resize(edges_.size());
        snap_.values.resize(edges_.size());
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            snap_.col_indices[i] = EdgeKey::dst_of(edges_[i].key);
            snap_.values[i] = std::bit_cast<double>(edges_[i].value);
        }
    }

    std::size_t num_vertices_ = 0;
    std::vector<Entry> edges_;
    CsrSnapshot snap_;
};

}  // namespace pmagraph

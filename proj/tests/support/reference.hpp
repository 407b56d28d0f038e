#pragma once

// Independent oracles and invariant checkers for the test suites. Everything
// here is deliberately naive (ordered maps, linear scans, dense matrices,
// plain queues) and must stay independent of the implementation paths it
// checks.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pmagraph/graph.hpp"
#include "pmagraph/pma.hpp"
#include "pmagraph/segment_engine.hpp"

namespace pmagraph::testing {

// Ordered-map oracle with the same batch semantics as the engines: per key,
// any insert in the batch leaves the key present with the last insert's
// value; deletes-only leaves it absent.
class MapOracle {
public:
    void insert(std::uint64_t key, std::uint64_t value) { map_[key] = value; }
    bool erase(std::uint64_t key) { return map_.erase(key) > 0; }

    void apply_batch(const std::vector<Update>& batch) {
        std::map<std::uint64_t, std::optional<std::uint64_t>> resolved;
        for (const Update& u : batch) {
            auto& slot = resolved[u.key];
            if (u.op == UpdateOp::kInsert) slot = u.value;
            else if (!slot.has_value()) slot = std::nullopt;
        }
        for (const auto& [key, value] : resolved) {
            if (value.has_value()) map_[key] = *value;
            else map_.erase(key);
        }
    }

    std::optional<std::uint64_t> search(std::uint64_t key) const {
        const auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(map_.size());
        for (const auto& [k, v] : map_) out.push_back(Entry{k, v});
        return out;
    }

    std::size_t size() const { return map_.size(); }

private:
    std::map<std::uint64_t, std::uint64_t> map_;
};

// Linear-scan version of the leaf search contract: the last leaf whose first
// non-empty key is <= key, else leaf 0.
inline std::size_t leaf_oracle(const PackedMemoryArray& pma, std::uint64_t key) {
    const std::size_t leaves = pma.layout().num_leaves();
    std::size_t best = 0;
    for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
        const auto [b, e] = pma.seg_range(0, leaf);
        for (std::size_t i = b; i < e; ++i) {
            if (pma.slots()[i].state == SlotState::kEmpty) continue;
            if (pma.slots()[i].key <= key) best = leaf;
            break;
        }
    }
    return best;
}

inline std::string check_sorted(const PackedMemoryArray& pma) {
    bool have = false;
    std::uint64_t last = 0;
    std::size_t count = 0;
    std::size_t tombs = 0;
    for (std::size_t i = 0; i < pma.slots().size(); ++i) {
        const Slot& s = pma.slots()[i];
        if (s.state == SlotState::kEmpty) {
            if (s.key != 0 || s.value != 0) return "empty slot not zeroed at " + std::to_string(i);
            continue;
        }
        if (have && s.key <= last) {
            return "keys not strictly increasing at slot " + std::to_string(i);
        }
        last = s.key;
        have = true;
        count += s.state == SlotState::kValid;
        tombs += s.state == SlotState::kTombstone;
    }
    if (count != pma.valid_count()) return "valid_count out of sync";
    if (tombs != pma.tombstone_count()) return "tombstone_count out of sync";
    return {};
}

// Density bounds per level, computed bottom-up in one pass. Lower bounds are
// structural guarantees of the rebalancing paths, so they are excused at
// minimum capacity and under lazy deletion (tombstones do not repair
// density); upper bounds always hold.
inline std::string check_density(const PackedMemoryArray& pma, bool lazy_mode) {
    const auto& layout = pma.layout();
    std::vector<std::size_t> counts(layout.num_leaves(), 0);
    const auto& slots = pma.slots();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        counts[layout.leaf_of_slot(i)] += slots[i].state == SlotState::kValid;
    }
    const bool check_min = !lazy_mode && pma.capacity() != PackedMemoryArray::kMinCapacity;
    for (int level = 0; level <= layout.height(); ++level) {
        const std::size_t mn = pma.min_entries(level);
        const std::size_t mx = pma.max_entries(level);
        for (std::size_t seg = 0; seg < counts.size(); ++seg) {
            if (counts[seg] > mx) {
                return "segment (" + std::to_string(level) + ", " + std::to_string(seg) +
                       ") above max: " + std::to_string(counts[seg]) + " > " + std::to_string(mx);
            }
            if (check_min && counts[seg] < mn) {
                return "segment (" + std::to_string(level) + ", " + std::to_string(seg) +
                       ") below min: " + std::to_string(counts[seg]) + " < " + std::to_string(mn);
            }
        }
        for (std::size_t seg = 0; 2 * seg + 1 < counts.size(); ++seg) {
            counts[seg] = counts[2 * seg] + counts[2 * seg + 1];
        }
        counts.resize((counts.size() + 1) / 2);
    }
    return {};
}

inline std::string check_pma_matches_oracle(const PackedMemoryArray& pma, const MapOracle& oracle) {
    const std::vector<Entry> got = pma.to_entries();
    const std::vector<Entry> want = oracle.entries();
    if (got.size() != want.size()) {
        return "size mismatch: pma " + std::to_string(got.size()) + " vs oracle " +
               std::to_string(want.size());
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].key != want[i].key) return "key mismatch at rank " + std::to_string(i);
        if (got[i].value != want[i].value) return "value mismatch at key " + std::to_string(got[i].key);
    }
    return {};
}

// --- graph oracles ---------------------------------------------------------

// From-scratch CSR over an ordered edge map; the reference for csr_snapshot.
inline CsrSnapshot reference_csr(std::size_t num_vertices,
                                 const std::map<std::pair<VertexId, VertexId>, double>& edges) {
    CsrSnapshot snap;
    snap.row_offsets.assign(num_vertices + 1, 0);
    for (const auto& [key, w] : edges) snap.row_offsets[key.first + 1]++;
    for (std::size_t v = 1; v <= num_vertices; ++v) snap.row_offsets[v] += snap.row_offsets[v - 1];
    snap.col_indices.reserve(edges.size());
    snap.values.reserve(edges.size());
    for (const auto& [key, w] : edges) {
        snap.col_indices.push_back(key.second);
        snap.values.push_back(w);
    }
    return snap;
}

inline std::string compare_csr(const CsrSnapshot& got, const CsrSnapshot& want) {
    if (got.row_offsets != want.row_offsets) return "row offsets differ";
    if (got.col_indices != want.col_indices) return "column indices differ";
    if (got.values != want.values) return "values differ";
    return {};
}

// Plain queue BFS over compact CSR.
inline std::vector<std::uint32_t> bfs_oracle(const CsrSnapshot& csr, std::uint32_t root) {
    const std::size_t n = csr.row_offsets.size() - 1;
    std::vector<std::uint32_t> dist(n, UINT32_MAX);
    std::queue<std::uint32_t> q;
    dist[root] = 0;
    q.push(root);
    while (!q.empty()) {
        const std::uint32_t u = q.front();
        q.pop();
        for (std::size_t i = csr.row_offsets[u]; i < csr.row_offsets[u + 1]; ++i) {
            const std::uint32_t v = csr.col_indices[i];
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

// Union-find over the undirected closure, labels canonicalized to the
// minimum member id.
inline std::vector<std::uint32_t> cc_oracle(const CsrSnapshot& csr) {
    const std::size_t n = csr.row_offsets.size() - 1;
    std::vector<std::uint32_t> parent(n);
    for (std::size_t v = 0; v < n; ++v) parent[v] = static_cast<std::uint32_t>(v);
    const auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::size_t i = csr.row_offsets[u]; i < csr.row_offsets[u + 1]; ++i) {
            const std::uint32_t a = find(u);
            const std::uint32_t b = find(csr.col_indices[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::uint32_t> label(n);
    for (std::uint32_t v = 0; v < n; ++v) label[v] = find(v);
    return label;
}

// Dense power iteration; independent arithmetic path for PageRank checks.
inline std::vector<double> pagerank_dense_oracle(const CsrSnapshot& csr, double damping,
                                                 std::size_t iterations) {
    const std::size_t n = csr.row_offsets.size() - 1;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::uint32_t u = 0; u < n; ++u) {
        const std::size_t deg = csr.row_offsets[u + 1] - csr.row_offsets[u];
        for (std::size_t i = csr.row_offsets[u]; i < csr.row_offsets[u + 1]; ++i) {
            m[csr.col_indices[i]][u] += 1.0 / static_cast<double>(deg);
        }
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);
    for (std::size_t it = 0; it < iterations; ++it) {
        double dangling = 0.0;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (csr.row_offsets[u + 1] == csr.row_offsets[u]) dangling += x[u];
        }
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (std::size_t u = 0; u < n; ++u) acc += m[v][u] * x[u];
            y[v] = (1.0 - damping) / static_cast<double>(n) +
                   damping * (acc + dangling / static_cast<double>(n));
        }
        x.swap(y);
    }
    return x;
}

// --- randomized traces ------------------------------------------------------

struct TraceRng {
    std::mt19937_64 rng;
    explicit TraceRng(std::uint64_t seed) : rng(seed) {}
    std::uint64_t key(std::uint64_t universe) { return rng() % universe; }
    bool chance(double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }
};

inline std::vector<Update> random_batch(TraceRng& rng, std::size_t size, std::uint64_t universe,
                                        double delete_fraction) {
    std::vector<Update> batch;
    batch.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        const std::uint64_t key = rng.key(universe);
        if (rng.chance(delete_fraction)) {
            batch.push_back(Update{key, 0, UpdateOp::kDelete});
        } else {
            batch.push_back(Update{key, rng.rng(), UpdateOp::kInsert});
        }
    }
    return batch;
}

}  // namespace pmagraph::testing

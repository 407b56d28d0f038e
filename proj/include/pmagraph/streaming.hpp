#pragma once

// Sliding-window driver over a timestamped edge stream: the graph is induced
// by the W most recent edges, each slide inserts the next batch and expires
// the oldest one. The window is a multiset of arrivals while the graph is a
// set, so an expiry only emits a deletion once the edge's multiplicity drops
// to zero and the graph edge set always equals the window's distinct edges.

#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmagraph/graph.hpp"

namespace pmagraph {

struct TimestampedEdge {
    VertexId src = 0;
    VertexId dst = 0;
    double weight = 1.0;
    std::uint64_t ts = 0;
};

struct EdgeStream {
    std::size_t num_vertices = 0;
    std::vector<TimestampedEdge> edges;  // non-decreasing ts

    void validate() const {
        for (std::size_t i = 1; i < edges.size(); ++i) {
            if (edges[i].ts < edges[i - 1].ts) {
                throw std::invalid_argument("EdgeStream: timestamps must be non-decreasing");
            }
        }
    }
};

// Portable bounded draw: mt19937_64 is fully specified, distributions are
// not, so sampling avoids std::uniform_int_distribution.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Seeded uniform permutation of arrival order, timestamps reassigned
// 0..n-1; for datasets that carry no timestamps of their own.
inline EdgeStream assign_random_timestamps(std::vector<TimestampedEdge> edges, std::size_t num_vertices,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = edges.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(edges[i - 1], edges[j]);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].ts = i;
    return EdgeStream{num_vertices, std::move(edges)};
}

struct SlideBatch {
    std::vector<WeightedEdge> inserts;
    std::vector<std::pair<VertexId, VertexId>> deletions;  // multiplicity-filtered
    std::vector<TimestampedEdge> expiries;                 // raw edges leaving the window
    bool final_partial = false;
};

class SlidingWindow {
public:
    explicit SlidingWindow(const EdgeStream& stream) : stream_(&stream) {
        if (stream.edges.empty() || stream.edges.size() < 2) {
            throw std::invalid_argument("SlidingWindow: stream needs at least two edges");
        }
        stream.validate();
        const std::size_t half = (stream.edges.size() + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) admit(stream.edges[i]);
        cursor_ = half;
    }

    // Window of the first half of the stream, graph built from its edge set.
    static std::pair<SlidingWindow, DynamicGraph> init_window(const EdgeStream& stream,
                                                              GraphConfig config = {}) {
        SlidingWindow window(stream);
        std::vector<WeightedEdge> edges;
        edges.reserve(window.resident_.size());
        for (const TimestampedEdge& e : window.resident_) {
            edges.push_back(WeightedEdge{e.src, e.dst, e.weight});
        }
        DynamicGraph graph = DynamicGraph::from_edges(stream.num_vertices, edges, config);
        return {std::move(window), std::move(graph)};
    }

    std::size_t window_size() const { return resident_.size(); }
    std::size_t remaining() const { return stream_->edges.size() - cursor_; }
    bool exhausted() const { return cursor_ >= stream_->edges.size(); }

    // FIFO slide: the next `batch` stream edges arrive, the same number of
    // oldest window edges expire.
    SlideBatch slide(std::size_t batch) {
        SlideBatch out;
        const std::size_t take = std::min(batch, remaining());
        out.final_partial = take < batch;
        for (std::size_t i = 0; i < take; ++i) {
            const TimestampedEdge& e = stream_->edges[cursor_++];
            admit(e);
            out.inserts.push_back(WeightedEdge{e.src, e.dst, e.weight});
        }
        for (std::size_t i = 0; i < take; ++i) {
            const TimestampedEdge e = resident_.front();
            resident_.pop_front();
            out.expiries.push_back(e);
            if (release(e)) out.deletions.emplace_back(e.src, e.dst);
        }
        return out;
    }

    // Explicit deletions: the expiring edges are drawn uniformly without
    // replacement from the window as it stood before this slide's arrivals,
    // not from its head. Drawing the full window's worth replaces it
    // entirely. Reproducible for a fixed generator state.
    SlideBatch slide_explicit_random(std::size_t batch, std::mt19937_64& rng) {
        SlideBatch out;
        const std::size_t take = std::min(batch, remaining());
        out.final_partial = take < batch;
        const std::size_t old_size = resident_.size();
        for (std::size_t i = 0; i < take; ++i) {
            const TimestampedEdge& e = stream_->edges[cursor_++];
            admit(e);
            out.inserts.push_back(WeightedEdge{e.src, e.dst, e.weight});
        }
        const std::size_t evict = std::min(take, old_size);
        std::vector<char> picked(old_size, 0);
        for (std::size_t drawn = 0; drawn < evict;) {
            const std::size_t idx = static_cast<std::size_t>(draw_below(rng, old_size));
            if (picked[idx]) continue;
            picked[idx] = 1;
            ++drawn;
        }
        std::deque<TimestampedEdge> kept;
        for (std::size_t i = 0; i < resident_.size(); ++i) {
            if (i >= old_size || !picked[i]) {
                kept.push_back(resident_[i]);
                continue;
            }
            out.expiries.push_back(resident_[i]);
            if (release(resident_[i])) out.deletions.emplace_back(resident_[i].src, resident_[i].dst);
        }
        resident_.swap(kept);
        return out;
    }

    // Distinct edges currently in the window; the contract for the graph's
    // edge set.
    std::vector<std::pair<VertexId, VertexId>> distinct_edges() const {
        std::vector<std::pair<VertexId, VertexId>> out;
        out.reserve(multiplicity_.size());
        for (const auto& [key, count] : multiplicity_) {
            out.emplace_back(EdgeKey::src_of(key), EdgeKey::dst_of(key));
        }
        return out;
    }

private:
    void admit(const TimestampedEdge& e) {
        resident_.push_back(e);
        multiplicity_[EdgeKey::pack(e.src, e.dst)]++;
    }

    // True when the last arrival of this edge left the window.
    bool release(const TimestampedEdge& e) {
        const std::uint64_t key = EdgeKey::pack(e.src, e.dst);
        auto it = multiplicity_.find(key);
        if (it == multiplicity_.end()) return false;
        if (--it->second == 0) {
            multiplicity_.erase(it);
            return true;
        }
        return false;
    }

    const EdgeStream* stream_;
    std::deque<TimestampedEdge> resident_;
    std::unordered_map<std::uint64_t, std::uint32_t> multiplicity_;
    std::size_t cursor_ = 0;
};

}  // namespace pmagraph

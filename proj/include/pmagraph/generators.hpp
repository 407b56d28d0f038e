#pragma once

// Synthetic edge-stream generators: recursive-quadrant power-law graphs and
// Erdos-Renyi G(n, p). Both are deterministic for a fixed seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pmagraph/streaming.hpp"

namespace pmagraph {

struct RmatParams {
    double a = 0.57;
    double b = 0.19;
    double c = 0.19;
    double d = 0.05;
};

// Recursive quadrant sampling: each of the log2(n) bit levels picks a
// quadrant by (a, b, c, d); heavier corners give the power-law degree tail.
// Duplicate edges and self loops stay in the stream, as arrivals.
inline EdgeStream gen_rmat(std::size_t num_vertices, std::size_t num_edges, RmatParams params = {},
                           std::uint64_t seed = 1) {
    if (num_vertices == 0 || (num_vertices & (num_vertices - 1)) != 0) {
        throw std::invalid_argument("gen_rmat: num_vertices must be a power of two");
    }
    const double sum = params.a + params.b + params.c + params.d;
    if (std::abs(sum - 1.0) > 1e-9 || params.a < 0 || params.b < 0 || params.c < 0 || params.d < 0) {
        throw std::invalid_argument("gen_rmat: quadrant probabilities must be non-negative and sum to 1");
    }
    int scale = 0;
    while ((std::size_t{1} << scale) < num_vertices) ++scale;
    std::mt19937_64 rng(seed);
    EdgeStream stream;
    stream.num_vertices = num_vertices;
    stream.edges.reserve(num_edges);
    const double ab = params.a + params.b;
    const double abc = ab + params.c;
    for (std::size_t e = 0; e < num_edges; ++e) {
        std::uint64_t row = 0;
        std::uint64_t col = 0;
        for (int bit = 0; bit < scale; ++bit) {
            const double r = draw_unit(rng);
            row <<= 1;
            col <<= 1;
            if (r < params.a) {
            } else if (r < ab) {
                col |= 1;
            } else if (r < abc) {
                row |= 1;
            } else {
                row |= 1;
                col |= 1;
            }
        }
        stream.edges.push_back(TimestampedEdge{static_cast<VertexId>(row), static_cast<VertexId>(col), 1.0, e});
    }
    return stream;
}

// G(n, p) over all ordered pairs, sampled by geometric gap skipping so the
// cost is proportional to the output, not n^2.
inline EdgeStream gen_erdos_renyi(std::size_t num_vertices, double density, std::uint64_t seed = 1) {
    if (density < 0.0 || density >= 1.0) {
        throw std::invalid_argument("gen_erdos_renyi: density must be in [0, 1)");
    }
    EdgeStream stream;
    stream.num_vertices = num_vertices;
    if (density == 0.0 || num_vertices == 0) return stream;
    std::mt19937_64 rng(seed);
    const double log1mp = std::log1p(-density);
    const std::uint64_t total = static_cast<std::uint64_t>(num_vertices) * num_vertices;
    std::uint64_t pos = 0;
    std::uint64_t ts = 0;
    while (true) {
        const double u = draw_unit(rng);
        const double gap = std::floor(std::log1p(-u) / log1mp);
        pos += static_cast<std::uint64_t>(gap) + 1;
        if (pos > total) break;
        const std::uint64_t idx = pos - 1;
        stream.edges.push_back(TimestampedEdge{static_cast<VertexId>(idx / num_vertices),
                                               static_cast<VertexId>(idx % num_vertices), 1.0, ts++});
    }
    return stream;
}

}  // namespace pmagraph

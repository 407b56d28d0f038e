#pragma once

// Graph algorithms over anything exposing num_vertices() and
// for_each_neighbor(v, fn): the live PMA-backed graph, the compact snapshot
// view, and the baseline containers. Iteration order per row is ascending
// destination everywhere, so floating-point results agree across containers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pmagraph {

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// Frontier BFS with deferred visited checks: each wave gathers every
// neighbor of the frontier into contiguous memory first and resolves the
// visited labels in a second pass.
template <typename Graph>
std::vector<std::uint32_t> bfs(const Graph& g, std::uint32_t root) {
    const std::size_t n = g.num_vertices();
    if (root >= n) throw std::invalid_argument("bfs: root outside vertex range");
    std::vector<std::uint32_t> dist(n, kUnreached);
    dist[root] = 0;
    std::vector<std::uint32_t> frontier{root};
    std::vector<std::uint32_t> gathered;
    std::vector<std::uint32_t> next;
    std::uint32_t depth = 0;
    while (!frontier.empty()) {
        ++depth;
        gathered.clear();
        for (const std::uint32_t u : frontier) {
            g.for_each_neighbor(u, [&](std::uint32_t v, double) { gathered.push_back(v); });
        }
        next.clear();
        for (const std::uint32_t v : gathered) {
            if (dist[v] == kUnreached) {
                dist[v] = depth;
                next.push_back(v);
            }
        }
        frontier.swap(next);
    }
    return dist;
}

// Connected components over the undirected closure: hook each edge's larger
// root under the smaller, then pointer-jump until every label is a root.
// Labels canonicalize to the minimum vertex id per component.
template <typename Graph>
std::vector<std::uint32_t> connected_components(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t u = 0; u < n; ++u) {
            g.for_each_neighbor(u, [&](std::uint32_t v, double) {
                const std::uint32_t pu = parent[u];
                const std::uint32_t pv = parent[v];
                if (pu < pv && pv == parent[pv]) {
                    parent[pv] = pu;
                    changed = true;
                } else if (pv < pu && pu == parent[pu]) {
                    parent[pu] = pv;
                    changed = true;
                }
            });
        }
        for (std::uint32_t v = 0; v < n; ++v) {
            while (parent[v] != parent[parent[v]]) {
                parent[v] = parent[parent[v]];
                changed = true;
            }
        }
    }
    return parent;
}

struct PageRankResult {
    std::vector<double> ranks;
    std::size_t iterations = 0;
    bool converged = false;
};

struct PageRankOptions {
    double damping = 0.85;
    double epsilon = 1e-3;  // 1-norm stop
    std::size_t max_iters = 200;
    const std::vector<double>* warm_start = nullptr;
};

// Power iteration on the out-degree-normalized transition matrix. Dangling
// mass redistributes uniformly each round so the vector keeps summing to 1;
// a warm start changes the iteration count, never the fixed point.
template <typename Graph>
PageRankResult pagerank(const Graph& g, PageRankOptions opts = {}) {
    const std::size_t n = g.num_vertices();
    if (n == 0) throw std::invalid_argument("pagerank: empty vertex set");
    PageRankResult res;
    std::vector<double>& x = res.ranks;
    if (opts.warm_start != nullptr) {
        if (opts.warm_start->size() != n) throw std::invalid_argument("pagerank: warm start size mismatch");
        x = *opts.warm_start;
    } else {
        x.assign(n, 1.0 / static_cast<double>(n));
    }
    std::vector<std::size_t> outdeg(n, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
        std::size_t d = 0;
        g.for_each_neighbor(u, [&](std::uint32_t, double) { ++d; });
        outdeg[u] = d;
    }
    std::vector<double> y(n);
    const double d = opts.damping;
    for (res.iterations = 1; res.iterations <= opts.max_iters; ++res.iterations) {
        double dangling = 0.0;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (outdeg[u] == 0) dangling += x[u];
        }
        const double base = (1.0 - d) / static_cast<double>(n) +
                            d * dangling / static_cast<double>(n);
        for (std::uint32_t u = 0; u < n; ++u) y[u] = base;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (outdeg[u] == 0) continue;
            const double share = d * x[u] / static_cast<double>(outdeg[u]);
            g.for_each_neighbor(u, [&](std::uint32_t v, double) { y[v] += share; });
        }
        double l1 = 0.0;
        for (std::size_t v = 0; v < n; ++v) l1 += std::abs(y[v] - x[v]);
        x.swap(y);
        if (l1 < opts.epsilon) {
            res.converged = true;
            return res;
        }
    }
    res.iterations = opts.max_iters;
    return res;
}

// y[u] = sum over stored edges (u, v) of weight(u, v) * x[v]; guards and
// gaps contribute nothing.
template <typename Graph>
std::vector<double> spmv(const Graph& g, const std::vector<double>& x) {
    const std::size_t n = g.num_vertices();
    if (x.size() != n) throw std::invalid_argument("spmv: dimension mismatch");
    std::vector<double> y(n, 0.0);
    for (std::uint32_t u = 0; u < n; ++u) {
        double acc = 0.0;
        g.for_each_neighbor(u, [&](std::uint32_t v, double w) { acc += w * x[v]; });
        y[u] = acc;
    }
    return y;
}

}  // namespace pmagraph

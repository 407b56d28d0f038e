#pragma once

// Benchmark harness shared by the CLI and the acceptance suite: container
// wrappers with one batch/analytics surface, the update-latency sweep, and
// the per-slide application benchmark. Timing excludes file IO; the first
// slide of every configuration is warmup and is not recorded.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pmagraph/analytics.hpp"
#include "pmagraph/baselines.hpp"
#include "pmagraph/generators.hpp"
#include "pmagraph/graph.hpp"
#include "pmagraph/streaming.hpp"
#include "pmagraph/update_stats.hpp"

namespace pmagraph {

enum class ContainerKind { kGpmaPlus, kGpmaLock, kAdjLists, kRebuildCsr };

inline const char* to_string(ContainerKind kind) {
    switch (kind) {
        case ContainerKind::kGpmaPlus: return "gpma-plus";
        case ContainerKind::kGpmaLock: return "gpma-lock";
        case ContainerKind::kAdjLists: return "adjlists";
        case ContainerKind::kRebuildCsr: return "rebuild-csr";
    }
    return "?";
}

inline ContainerKind parse_container(const std::string& name) {
    if (name == "gpma-plus") return ContainerKind::kGpmaPlus;
    if (name == "gpma-lock") return ContainerKind::kGpmaLock;
    if (name == "adjlists") return ContainerKind::kAdjLists;
    if (name == "rebuild-csr") return ContainerKind::kRebuildCsr;
    throw std::invalid_argument("unknown container '" + name +
                                "' (expected gpma-plus|gpma-lock|adjlists|rebuild-csr)");
}

struct BenchRecord {
    std::string dataset;
    std::string container;
    std::size_t batch_size = 0;
    std::string phase;  // update | analytics
    double mean_wall_ms = 0.0;
    double mean_slot_writes = 0.0;
    double mean_rounds = 0.0;
    std::size_t repetitions = 0;

    static std::string csv_header() {
        return "dataset,container,batch_size,phase,mean_wall_ms,mean_slot_writes,mean_rounds,repetitions";
    }

    std::string csv_row() const {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%s,%.6f,%.3f,%.3f,%zu", dataset.c_str(),
                      container.c_str(), batch_size, phase.c_str(), mean_wall_ms, mean_slot_writes,
                      mean_rounds, repetitions);
        return buf;
    }
};

// One surface over the four container kinds.
class BenchContainer {
    using Impl = std::variant<DynamicGraph, AdjListsGraph, RebuildCsrGraph>;

public:
    static BenchContainer make(ContainerKind kind, std::size_t num_vertices,
                               std::span<const WeightedEdge> edges, unsigned workers,
                               DeletionMode deletion_mode) {
        switch (kind) {
            case ContainerKind::kGpmaPlus: {
                GraphConfig cfg;
                cfg.engine = UpdateEngine::kSegment;
                cfg.deletion_mode = deletion_mode;
                cfg.workers = workers;
                return BenchContainer(kind, Impl(DynamicGraph::from_edges(num_vertices, edges, cfg)));
            }
            case ContainerKind::kGpmaLock: {
                GraphConfig cfg;
                cfg.engine = UpdateEngine::kLock;
                cfg.workers = workers;
                return BenchContainer(kind, Impl(DynamicGraph::from_edges(num_vertices, edges, cfg)));
            }
            case ContainerKind::kAdjLists:
                return BenchContainer(kind, Impl(std::in_place_type<AdjListsGraph>, num_vertices, edges));
            case ContainerKind::kRebuildCsr:
                return BenchContainer(kind, Impl(std::in_place_type<RebuildCsrGraph>, num_vertices, edges));
        }
        throw std::logic_error("unreachable container kind");
    }

    ContainerKind kind() const { return kind_; }

    UpdateStats apply(const SlideBatch& slide) {
        return std::visit(
            [&](auto& g) { return g.apply_batch(slide.inserts, slide.deletions); }, impl_);
    }

    CsrSnapshot csr_snapshot() const {
        return std::visit([](const auto& g) { return g.csr_snapshot(); }, impl_);
    }

    std::vector<std::uint32_t> run_bfs(std::uint32_t root) const {
        return std::visit([&](const auto& g) { return bfs(g, root); }, impl_);
    }

    std::vector<std::uint32_t> run_cc() const {
        return std::visit([](const auto& g) { return connected_components(g); }, impl_);
    }

    PageRankResult run_pagerank(PageRankOptions opts) const {
        return std::visit([&](const auto& g) { return pagerank(g, opts); }, impl_);
    }

    std::size_t num_vertices() const {
        return std::visit([](const auto& g) { return g.num_vertices(); }, impl_);
    }

private:
    BenchContainer(ContainerKind kind, Impl impl) : kind_(kind), impl_(std::move(impl)) {}

    ContainerKind kind_;
    Impl impl_;
};

struct UpdateBenchOptions {
    std::vector<std::size_t> batch_sizes;
    std::size_t slides_per_size = 5;  // measured slides; one extra warmup
    unsigned workers = 1;
    DeletionMode deletion_mode = DeletionMode::kLazy;
    bool sorted_stream = false;  // replay the stream in key order (worst case)
    std::string dataset_name = "stream";
};

// The update-latency sweep: for each batch size, re-initialize the window,
// run one warmup slide, then measure `slides_per_size` slides.
inline std::vector<BenchRecord> bench_update(const EdgeStream& input,
                                             const std::vector<ContainerKind>& containers,
                                             const UpdateBenchOptions& opts) {
    EdgeStream stream = input;
    if (opts.sorted_stream) {
        sort_by_key(stream.edges, [](const TimestampedEdge& e) { return EdgeKey::pack(e.src, e.dst); });
        for (std::size_t i = 0; i < stream.edges.size(); ++i) stream.edges[i].ts = i;
    }
    std::vector<BenchRecord> records;
    for (const ContainerKind kind : containers) {
        for (const std::size_t batch : opts.batch_sizes) {
            SlidingWindow window(stream);
            std::vector<WeightedEdge> initial;
            initial.reserve(window.window_size());
            for (std::size_t i = 0; i < (stream.edges.size() + 1) / 2; ++i) {
                initial.push_back(WeightedEdge{stream.edges[i].src, stream.edges[i].dst,
                                               stream.edges[i].weight});
            }
            BenchContainer container =
                BenchContainer::make(kind, stream.num_vertices, initial, opts.workers,
                                     opts.deletion_mode);

            BenchRecord rec;
            rec.dataset = opts.dataset_name;
            rec.container = to_string(kind);
            rec.batch_size = batch;
            rec.phase = "update";
            double wall_ns = 0.0;
            double writes = 0.0;
            double rounds = 0.0;
            std::size_t measured = 0;
            for (std::size_t s = 0; s <= opts.slides_per_size && !window.exhausted(); ++s) {
                const SlideBatch slide = window.slide(batch);
                const UpdateStats stats = container.apply(slide);
                if (s == 0) continue;  // warmup
                wall_ns += static_cast<double>(stats.wall_ns);
                writes += static_cast<double>(stats.slot_writes);
                rounds += static_cast<double>(stats.rounds);
                ++measured;
            }
            if (measured == 0) continue;
            rec.mean_wall_ms = wall_ns / static_cast<double>(measured) / 1e6;
            rec.mean_slot_writes = writes / static_cast<double>(measured);
            rec.mean_rounds = rounds / static_cast<double>(measured);
            rec.repetitions = measured;
            records.push_back(rec);
        }
    }
    return records;
}

enum class BenchApp { kBfs, kCc, kPageRank };

inline const char* to_string(BenchApp app) {
    switch (app) {
        case BenchApp::kBfs: return "bfs";
        case BenchApp::kCc: return "cc";
        case BenchApp::kPageRank: return "pagerank";
    }
    return "?";
}

inline BenchApp parse_app(const std::string& name) {
    if (name == "bfs") return BenchApp::kBfs;
    if (name == "cc") return BenchApp::kCc;
    if (name == "pagerank") return BenchApp::kPageRank;
    throw std::invalid_argument("unknown app '" + name + "' (expected bfs|cc|pagerank)");
}

struct AppBenchOptions {
    std::vector<double> slide_fractions = {0.0001, 0.001, 0.01};
    std::size_t slides_per_fraction = 5;  // measured; one extra warmup
    unsigned workers = 1;
    DeletionMode deletion_mode = DeletionMode::kLazy;
    bool explicit_deletions = false;  // random eviction instead of FIFO expiry
    std::uint64_t seed = 1;
    std::string dataset_name = "stream";
};

// Per slide: apply updates, then run the application (BFS from a fresh
// random root each slide). Records one update row and one analytics row per
// (container, fraction).
inline std::vector<BenchRecord> bench_app(const EdgeStream& stream,
                                          const std::vector<ContainerKind>& containers, BenchApp app,
                                          const AppBenchOptions& opts) {
    using Clock = std::chrono::steady_clock;
    std::vector<BenchRecord> records;
    for (const ContainerKind kind : containers) {
        for (const double fraction : opts.slide_fractions) {
            const std::size_t batch =
                std::max<std::size_t>(1, static_cast<std::size_t>(
                                             fraction * static_cast<double>(stream.edges.size())));
            SlidingWindow window(stream);
            std::vector<WeightedEdge> initial;
            for (std::size_t i = 0; i < (stream.edges.size() + 1) / 2; ++i) {
                initial.push_back(WeightedEdge{stream.edges[i].src, stream.edges[i].dst,
                                               stream.edges[i].weight});
            }
            BenchContainer container = BenchContainer::make(kind, stream.num_vertices, initial,
                                                            opts.workers, opts.deletion_mode);
            std::mt19937_64 rng(opts.seed);
            std::vector<double> warm;  // previous vector feeds the next power iteration

            BenchRecord update_rec;
            update_rec.dataset = opts.dataset_name;
            update_rec.container = to_string(kind);
            update_rec.batch_size = batch;
            update_rec.phase = "update";
            BenchRecord app_rec = update_rec;
            app_rec.phase = "analytics";

            double update_ns = 0.0;
            double writes = 0.0;
            double rounds = 0.0;
            double app_ns = 0.0;
            std::size_t measured = 0;
            for (std::size_t s = 0; s <= opts.slides_per_fraction && !window.exhausted(); ++s) {
                const SlideBatch slide = opts.explicit_deletions
                                             ? window.slide_explicit_random(batch, rng)
                                             : window.slide(batch);
                const UpdateStats stats = container.apply(slide);

                const auto root = static_cast<std::uint32_t>(draw_below(rng, stream.num_vertices));
                const auto t0 = Clock::now();
                switch (app) {
                    case BenchApp::kBfs: {
                        const auto dist = container.run_bfs(root);
                        (void)dist;
                        break;
                    }
                    case BenchApp::kCc: {
                        const auto labels = container.run_cc();
                        (void)labels;
                        break;
                    }
                    case BenchApp::kPageRank: {
                        PageRankOptions popts;
                        if (!warm.empty()) popts.warm_start = &warm;
                        const PageRankResult res = container.run_pagerank(popts);
                        warm = res.ranks;
                        double sum = 0.0;
                        for (const double r : warm) sum += r;
                        if (res.converged && std::abs(sum - 1.0) > 1e-6) {
                            throw std::runtime_error("pagerank mass leaked: sum " +
                                                     std::to_string(sum));
                        }
                        break;
                    }
                }
                const auto t1 = Clock::now();
                if (s == 0) continue;  // warmup
                update_ns += static_cast<double>(stats.wall_ns);
                writes += static_cast<double>(stats.slot_writes);
                rounds += static_cast<double>(stats.rounds);
                app_ns += static_cast<double>(std::chrono::nanoseconds(t1 - t0).count());
                ++measured;
            }
            if (measured == 0) continue;
            update_rec.mean_wall_ms = update_ns / static_cast<double>(measured) / 1e6;
            update_rec.mean_slot_writes = writes / static_cast<double>(measured);
            update_rec.mean_rounds = rounds / static_cast<double>(measured);
            update_rec.repetitions = measured;
            app_rec.mean_wall_ms = app_ns / static_cast<double>(measured) / 1e6;
            app_rec.repetitions = measured;
            records.push_back(update_rec);
            records.push_back(app_rec);
        }
    }
    return records;
}

}  // namespace pmagraph

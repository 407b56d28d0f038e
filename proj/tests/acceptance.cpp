// Acceptance suite: one binary, one pass/fail line per criterion, nonzero
// exit when any criterion fails. Tolerances and thresholds are pinned in the
// code below; runtimes target a small desktop machine.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pmagraph/analytics.hpp"
#include "pmagraph/bench.hpp"
#include "pmagraph/generators.hpp"
#include "pmagraph/lock_engine.hpp"
#include "pmagraph/segment_engine.hpp"
#include "pmagraph/streaming.hpp"
#include "support/reference.hpp"

using namespace pmagraph;
using namespace pmagraph::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Threshold table: capacity 32, leaf 4 reproduces the reference table.
Outcome criterion_threshold_table() {
    std::vector<Entry> entries;
    for (std::uint64_t k = 1; k <= 18; ++k) entries.push_back(Entry{k * 11, k});
    const PackedMemoryArray pma = PackedMemoryArray::from_sorted(entries, 0.75);
    if (pma.capacity() != 32 || pma.layout().leaf_size() != 4 || pma.layout().height() != 3) {
        return {false, "expected capacity 32 / leaf 4 / height 3"};
    }
    const std::size_t sizes[] = {4, 8, 16, 32};
    const double rho[] = {0.08, 0.19, 0.29, 0.40};
    const double tau[] = {0.92, 0.88, 0.84, 0.80};
    const std::size_t mins[] = {1, 2, 4, 8};
    const std::size_t maxs[] = {3, 6, 12, 24};
    for (int level = 0; level <= 3; ++level) {
        const auto [lo, hi] = pma.thresholds(level);
        if (pma.layout().seg_size(level) != sizes[level]) return {false, "segment size mismatch"};
        if (std::abs(lo - rho[level]) >= 0.005 || std::abs(hi - tau[level]) >= 0.005) {
            return {false, "interpolated thresholds off at level " + std::to_string(level)};
        }
        if (pma.min_entries(level) != mins[level] || pma.max_entries(level) != maxs[level]) {
            return {false, "integer bounds off at level " + std::to_string(level)};
        }
    }
    return {true, "seg sizes 4/8/16/32, rho/tau within 0.005, min 1/2/4/8, max 3/6/12/24"};
}

// ---------------------------------------------------------------------------
// 2. Oracle equivalence over randomized traces for every engine.
Outcome criterion_oracle_equivalence() {
    constexpr int kTraces = 100;
    constexpr std::size_t kOps = std::size_t{1} << 14;
    constexpr std::size_t kBatch = 512;
    std::mt19937_64 seeds(20240817);
    WorkerPool pool1(1);
    WorkerPool pool4(4);

    for (int trace = 0; trace < kTraces; ++trace) {
        const std::uint64_t seed = seeds();
        const std::uint64_t universe = 4096 + seeds() % 120000;
        const double delete_fraction = 0.2 + 0.000004 * static_cast<double>(seeds() % 75000);

        TraceRng gen(seed);
        std::vector<std::vector<Update>> batches;
        for (std::size_t done = 0; done < kOps; done += kBatch) {
            batches.push_back(random_batch(gen, kBatch, universe, delete_fraction));
        }

        MapOracle oracle;
        PackedMemoryArray sequential;
        PackedMemoryArray lock_based;
        struct PlusConfig {
            DeletionMode mode;
            WorkerPool* pool;
            PackedMemoryArray pma;
        };
        PlusConfig plus[4] = {{DeletionMode::kLazy, &pool1, PackedMemoryArray{}},
                              {DeletionMode::kLazy, &pool4, PackedMemoryArray{}},
                              {DeletionMode::kEager, &pool1, PackedMemoryArray{}},
                              {DeletionMode::kEager, &pool4, PackedMemoryArray{}}};

        for (const auto& batch : batches) {
            // Sequential ops use the same per-key resolution as the batches.
            auto resolved = batch;
            sort_by_key(resolved, [](const Update& u) { return u.key; });
            resolve_duplicates(resolved);
            for (const Update& u : resolved) {
                if (u.op == UpdateOp::kInsert) sequential.insert(u.key, u.value);
                else sequential.erase(u.key);
            }
            LockEngineConfig lock_cfg;
            lock_cfg.workers = 2;
            batch_update_lockbased(lock_based, batch, lock_cfg);
            for (PlusConfig& cfg : plus) {
                SegmentEngineConfig ecfg;
                ecfg.deletion_mode = cfg.mode;
                ecfg.workers = cfg.pool->workers();
                batch_update(cfg.pma, batch, ecfg, cfg.pool);
            }
            oracle.apply_batch(batch);

            // Checkpoint: sortedness and density invariants on every engine.
            for (const PackedMemoryArray* pma : {&sequential, &lock_based}) {
                if (const auto err = check_sorted(*pma); !err.empty()) return {false, err};
                if (const auto err = check_density(*pma, false); !err.empty()) return {false, err};
            }
            for (const PlusConfig& cfg : plus) {
                if (const auto err = check_sorted(cfg.pma); !err.empty()) return {false, err};
                const bool lazy = cfg.mode == DeletionMode::kLazy;
                if (const auto err = check_density(cfg.pma, lazy); !err.empty()) return {false, err};
            }
        }

        for (const PackedMemoryArray* pma : {&sequential, &lock_based, &plus[0].pma, &plus[1].pma,
                                             &plus[2].pma, &plus[3].pma}) {
            if (const auto err = check_pma_matches_oracle(*pma, oracle); !err.empty()) {
                return {false, "trace " + std::to_string(trace) + ": " + err};
            }
        }
    }
    return {true, "100 traces x 16384 ops: all engines match the oracle, invariants at every checkpoint"};
}

// ---------------------------------------------------------------------------
// 3. Worker-count determinism of the segment engine.
Outcome criterion_worker_determinism() {
    std::mt19937_64 seeds(7177);
    WorkerPool pool1(1);
    WorkerPool pool2(2);
    WorkerPool pool8(8);
    for (int round = 0; round < 50; ++round) {
        TraceRng rng(seeds());
        PackedMemoryArray base;
        const std::size_t n = 2000 + rng.key(8000);
        for (std::size_t i = 0; i < n; ++i) base.insert(rng.rng(), rng.rng());
        const auto batch = random_batch(rng, 1024 + rng.key(2048), 1u << 20, 0.3);
        const DeletionMode mode = round % 2 == 0 ? DeletionMode::kLazy : DeletionMode::kEager;

        std::vector<Slot> reference;
        int idx = 0;
        for (WorkerPool* pool : {&pool1, &pool2, &pool8}) {
            PackedMemoryArray pma = base;
            SegmentEngineConfig cfg;
            cfg.deletion_mode = mode;
            cfg.workers = pool->workers();
            batch_update(pma, batch, cfg, pool);
            if (idx++ == 0) {
                reference = pma.slots();
            } else if (pma.slots() != reference) {
                return {false, "slot arrays diverge at batch " + std::to_string(round) + " with " +
                                   std::to_string(pool->workers()) + " workers"};
            }
        }
    }
    return {true, "50 batches byte-identical across 1/2/8 workers"};
}

// ---------------------------------------------------------------------------
// 4. Amortized slot-writes per insertion scale like c * log^2 N.
Outcome criterion_amortized_cost() {
    std::ostringstream detail;
    double c_min = 1e300;
    double c_max = 0.0;
    std::mt19937_64 rng(99);
    for (const std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 14, std::size_t{1} << 16}) {
        PackedMemoryArray pma;
        pma.reset_slot_writes();
        for (std::size_t i = 0; i < n; ++i) pma.insert(rng(), i);
        const double mean = static_cast<double>(pma.slot_writes()) / static_cast<double>(n);
        const double log2n = std::log2(static_cast<double>(n));
        const double c = mean / (log2n * log2n);
        c_min = std::min(c_min, c);
        c_max = std::max(c_max, c);
        detail << "N=2^" << static_cast<int>(log2n) << " mean=" << mean << " c=" << c << "; ";
    }
    const double spread = c_max / c_min;
    detail << "spread " << spread << "x";
    return {spread < 2.0, detail.str()};
}

// ---------------------------------------------------------------------------
// 5. Batch updates beat the rebuild baseline on writes and wall time.
Outcome criterion_batch_vs_rebuild() {
    const std::size_t graph_edges = std::size_t{1} << 20;
    const EdgeStream stream = gen_rmat(std::size_t{1} << 17, 2 * graph_edges, {}, 404);
    std::vector<WeightedEdge> initial;
    initial.reserve(graph_edges);
    for (std::size_t i = 0; i < (stream.edges.size() + 1) / 2; ++i) {
        initial.push_back({stream.edges[i].src, stream.edges[i].dst, stream.edges[i].weight});
    }

    std::ostringstream detail;
    bool pass = true;
    double writes_ratio_at_tenth_pct = 0.0;
    for (const double fraction : {0.0001, 0.001, 0.01}) {
        const std::size_t batch =
            fraction == 0.001 ? std::size_t{1} << 10
                              : std::max<std::size_t>(
                                    1, static_cast<std::size_t>(fraction *
                                                                static_cast<double>(graph_edges)));
        double plus_wall = 0.0;
        double plus_writes = 0.0;
        double rebuild_wall = 0.0;
        double rebuild_writes = 0.0;
        for (const ContainerKind kind : {ContainerKind::kGpmaPlus, ContainerKind::kRebuildCsr}) {
            SlidingWindow window(stream);
            BenchContainer container =
                BenchContainer::make(kind, stream.num_vertices, initial, 2, DeletionMode::kLazy);
            double wall = 0.0;
            double writes = 0.0;
            std::size_t measured = 0;
            for (std::size_t s = 0; s <= 5; ++s) {
                const SlideBatch slide = window.slide(batch);
                const UpdateStats stats = container.apply(slide);
                if (s == 0) continue;
                wall += static_cast<double>(stats.wall_ns);
                writes += static_cast<double>(stats.slot_writes);
                ++measured;
            }
            wall /= static_cast<double>(measured);
            writes /= static_cast<double>(measured);
            if (kind == ContainerKind::kGpmaPlus) {
                plus_wall = wall;
                plus_writes = writes;
            } else {
                rebuild_wall = wall;
                rebuild_writes = writes;
            }
        }
        if (fraction == 0.001) writes_ratio_at_tenth_pct = plus_writes / rebuild_writes;
        detail << "f=" << fraction << " wall " << plus_wall / 1e6 << "ms vs " << rebuild_wall / 1e6
               << "ms, writes " << plus_writes << " vs " << rebuild_writes << "; ";
        if (plus_wall >= rebuild_wall) pass = false;
    }
    detail << "writes ratio at 2^10 = " << writes_ratio_at_tenth_pct;
    if (writes_ratio_at_tenth_pct > 0.10) pass = false;
    return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// 6. Segment-phase speedup with 4 workers over 1.
Outcome criterion_parallel_speedup() {
    // Fill to capacity 2^20, then time the segment phase of the same batches
    // under both pools.
    std::mt19937_64 rng(550);
    std::map<std::uint64_t, std::uint64_t> staging;
    while (staging.size() < 470000) staging[rng()] = rng();
    std::vector<Entry> entries;
    entries.reserve(staging.size());
    for (const auto& [k, v] : staging) entries.push_back(Entry{k, v});
    const PackedMemoryArray base = PackedMemoryArray::from_sorted(entries, 0.5);
    if (base.capacity() != (std::size_t{1} << 20)) {
        return {false, "setup: expected capacity 2^20, got " + std::to_string(base.capacity())};
    }

    constexpr int kBatches = 24;
    std::vector<std::vector<Update>> batches;
    TraceRng trng(909);
    for (int b = 0; b < kBatches; ++b) {
        batches.push_back(random_batch(trng, std::size_t{1} << 12, UINT64_MAX, 0.25));
    }

    double phase_ns[2] = {0.0, 0.0};
    int idx = 0;
    for (const unsigned workers : {1u, 4u}) {
        WorkerPool pool(workers);
        PackedMemoryArray pma = base;
        for (const auto& batch : batches) {
            SegmentEngineConfig cfg;
            cfg.workers = workers;
            const UpdateStats stats = batch_update(pma, batch, cfg, &pool);
            phase_ns[idx] += static_cast<double>(stats.segment_phase_ns);
        }
        ++idx;
    }
    const double speedup = phase_ns[0] / phase_ns[1];
    std::ostringstream detail;
    detail << "segment-phase speedup " << speedup << "x at 4 workers vs 1 (hardware threads: "
           << std::thread::hardware_concurrency() << ")";
    return {speedup >= 2.0, detail.str()};
}

// ---------------------------------------------------------------------------
// 7. CSR fidelity: the worked example and a long random-slide replay.
Outcome criterion_csr_fidelity() {
    const std::vector<WeightedEdge> example = {{0, 0, 1.0}, {0, 2, 2.0}, {1, 2, 3.0},
                                               {2, 0, 4.0}, {2, 1, 5.0}, {2, 2, 6.0}};
    const DynamicGraph g = DynamicGraph::from_edges(3, example);
    const CsrSnapshot snap = g.csr_snapshot();
    if (snap.row_offsets != std::vector<std::size_t>{0, 2, 3, 6} ||
        snap.col_indices != std::vector<VertexId>{0, 2, 2, 0, 1, 2} ||
        snap.values != std::vector<double>{1, 2, 3, 4, 5, 6}) {
        return {false, "worked example arrays mismatch"};
    }

    const EdgeStream stream = gen_rmat(std::size_t{1} << 14, std::size_t{1} << 18, {}, 77);
    auto [window, graph] = SlidingWindow::init_window(stream);
    std::map<std::pair<VertexId, VertexId>, double> oracle;
    for (std::size_t i = 0; i < window.window_size(); ++i) {
        oracle[{stream.edges[i].src, stream.edges[i].dst}] = stream.edges[i].weight;
    }
    std::size_t slides = 0;
    for (; slides < 1000 && !window.exhausted(); ++slides) {
        const SlideBatch slide = window.slide(128);
        graph.apply_batch(slide.inserts, slide.deletions);
        for (const auto& d : slide.deletions) oracle.erase(d);
        for (const auto& e : slide.inserts) oracle[{e.src, e.dst}] = e.weight;
        if (slides % 250 == 0 || slides == 999) {
            if (const auto err = compare_csr(graph.csr_snapshot(),
                                             reference_csr(graph.num_vertices(), oracle));
                !err.empty()) {
                return {false, "slide " + std::to_string(slides) + ": " + err};
            }
        }
    }
    return {true, "worked example exact; snapshot equals from-scratch CSR through " +
                      std::to_string(slides) + " random slides"};
}

// ---------------------------------------------------------------------------
// 8. Analytics on the live view equal the snapshot across random slides.
Outcome criterion_analytics_equality() {
    const EdgeStream stream = gen_rmat(std::size_t{1} << 13, std::size_t{1} << 17, {}, 88);
    auto [window, graph] = SlidingWindow::init_window(stream);
    std::mt19937_64 rng(31337);
    std::vector<double> warm;
    for (int s = 0; s < 20; ++s) {
        const SlideBatch slide = window.slide(512);
        graph.apply_batch(slide.inserts, slide.deletions);
        const CsrSnapshot snap = graph.csr_snapshot();
        const CsrView view(snap);

        const auto root = static_cast<std::uint32_t>(draw_below(rng, graph.num_vertices()));
        if (bfs(graph, root) != bfs_oracle(snap, root)) {
            return {false, "BFS diverged at slide " + std::to_string(s)};
        }
        if (connected_components(graph) != cc_oracle(snap)) {
            return {false, "CC diverged at slide " + std::to_string(s)};
        }

        PageRankOptions opts;  // damping 0.85, L1 stop 1e-3
        opts.warm_start = warm.empty() ? nullptr : &warm;
        const PageRankResult live = pagerank(graph, opts);
        const PageRankResult ref = pagerank(view, opts);
        if (live.iterations != ref.iterations) {
            return {false, "PageRank iteration counts differ at slide " + std::to_string(s)};
        }
        double sum = 0.0;
        for (std::size_t v = 0; v < live.ranks.size(); ++v) {
            if (std::abs(live.ranks[v] - ref.ranks[v]) > 1e-9) {
                return {false, "PageRank L-inf above 1e-9 at slide " + std::to_string(s)};
            }
            sum += live.ranks[v];
        }
        if (live.converged && std::abs(sum - 1.0) > 1e-6) {
            return {false, "PageRank mass " + std::to_string(sum) + " at slide " + std::to_string(s)};
        }
        warm = live.ranks;
    }
    return {true, "BFS, CC and PageRank identical on live view and snapshot over 20 slides"};
}

// ---------------------------------------------------------------------------
// 9. Sorted-batch stress: the lock engine needs strictly more rounds.
Outcome criterion_sorted_stress() {
    std::mt19937_64 rng(62);
    PackedMemoryArray base;
    for (int i = 0; i < 100000; ++i) base.insert((rng() % 4000000) * 256 + (rng() & 0xff), rng());

    // Fully sorted batch of 2^10 consecutive fresh keys.
    std::vector<Update> sorted_batch;
    const std::uint64_t start = 2000000 * 256 + 128;
    for (std::uint64_t k = 0; k < 1024; ++k) {
        sorted_batch.push_back(Update{start + k * 2, k, UpdateOp::kInsert});
    }

    PackedMemoryArray lock_pma = base;
    LockEngineConfig lock_cfg;
    lock_cfg.workers = 2;
    const UpdateStats lock_stats = batch_update_lockbased(lock_pma, sorted_batch, lock_cfg);

    PackedMemoryArray plus_pma = base;
    const UpdateStats plus_stats = batch_update(plus_pma, sorted_batch, {});

    if (lock_stats.rounds <= plus_stats.rounds) {
        return {false, "lock rounds " + std::to_string(lock_stats.rounds) +
                           " not above segment rounds " + std::to_string(plus_stats.rounds)};
    }

    // The segment engine still satisfies criteria 2 and 3 on sorted batches.
    MapOracle oracle;
    base.for_each_valid([&](std::uint64_t k, std::uint64_t v) { oracle.insert(k, v); });
    oracle.apply_batch(sorted_batch);
    if (const auto err = check_pma_matches_oracle(plus_pma, oracle); !err.empty()) {
        return {false, "segment engine vs oracle on sorted batch: " + err};
    }
    if (const auto err = check_pma_matches_oracle(lock_pma, oracle); !err.empty()) {
        return {false, "lock engine vs oracle on sorted batch: " + err};
    }
    if (const auto err = check_sorted(plus_pma); !err.empty()) return {false, err};
    if (const auto err = check_density(plus_pma, true); !err.empty()) return {false, err};
    std::vector<Slot> reference;
    for (const unsigned workers : {1u, 2u, 8u}) {
        PackedMemoryArray pma = base;
        SegmentEngineConfig cfg;
        cfg.workers = workers;
        batch_update(pma, sorted_batch, cfg);
        if (reference.empty()) reference = pma.slots();
        else if (pma.slots() != reference) return {false, "sorted batch not worker-deterministic"};
    }
    return {true, "lock rounds " + std::to_string(lock_stats.rounds) + " > segment rounds " +
                      std::to_string(plus_stats.rounds) + "; equivalence and determinism hold"};
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "threshold table", criterion_threshold_table},
        {2, "oracle equivalence", criterion_oracle_equivalence},
        {3, "worker determinism", criterion_worker_determinism},
        {4, "amortized cost scaling", criterion_amortized_cost},
        {5, "batch vs rebuild work", criterion_batch_vs_rebuild},
        {6, "parallel speedup", criterion_parallel_speedup},
        {7, "CSR fidelity", criterion_csr_fidelity},
        {8, "analytics equality", criterion_analytics_equality},
        {9, "sorted-stream stress", criterion_sorted_stress},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = Clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            static_cast<double>(
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count()) /
            1000.0;
        std::printf("[%s] criterion %d: %s (%.1fs) — %s\n", outcome.pass ? "PASS" : "FAIL", c.id,
                    c.name, secs, outcome.detail.c_str());
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures;
}

// Command-line harness: dataset generation, the update-latency sweep, the
// streaming application benchmarks, and a self-contained verification pass.
// CSV goes to --out or stdout; timing excludes file IO.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmagraph/analytics.hpp"
#include "pmagraph/bench.hpp"
#include "pmagraph/generators.hpp"
#include "pmagraph/io.hpp"
#include "pmagraph/lock_engine.hpp"
#include "pmagraph/segment_engine.hpp"

namespace {

using namespace pmagraph;

std::vector<std::size_t> parse_sizes(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    return out;
}

std::vector<double> parse_fractions(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

// Desk-scale default when no dataset file is given.
EdgeStream default_stream(std::uint64_t seed) {
    std::fprintf(stderr, "generating default stream: rmat, 2^17 vertices, 2^21 edges, seed %llu\n",
                 static_cast<unsigned long long>(seed));
    return gen_rmat(std::size_t{1} << 17, std::size_t{1} << 21, {}, seed);
}

EdgeStream load_or_generate(const std::string& dataset, std::uint64_t seed) {
    if (dataset.empty()) return default_stream(seed);
    EdgeStream stream = read_stream(dataset);
    if (stream.edges.empty()) throw std::runtime_error(dataset + ": empty stream");
    return stream;
}

void emit_csv(const std::string& out_path, const std::vector<BenchRecord>& records) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot open " + out_path + " for writing");
        out = &file;
    }
    *out << BenchRecord::csv_header() << '\n';
    for (const BenchRecord& r : records) *out << r.csv_row() << '\n';
}

// --- verify ------------------------------------------------------------

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = {}) {
    std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
                detail.c_str());
    if (!ok) ++failures;
}

void verify_thresholds() {
    std::vector<Entry> entries;
    for (std::uint64_t k = 1; k <= 18; ++k) entries.push_back(Entry{k * 5, k});
    const PackedMemoryArray pma = PackedMemoryArray::from_sorted(entries, 0.75);
    bool ok = pma.capacity() == 32 && pma.layout().leaf_size() == 4;
    const std::size_t mins[] = {1, 2, 4, 8};
    const std::size_t maxs[] = {3, 6, 12, 24};
    const double rho[] = {0.08, 0.19, 0.29, 0.40};
    const double tau[] = {0.92, 0.88, 0.84, 0.80};
    for (int level = 0; ok && level <= 3; ++level) {
        const auto [lo, hi] = pma.thresholds(level);
        ok = ok && std::abs(lo - rho[level]) < 0.005 && std::abs(hi - tau[level]) < 0.005;
        ok = ok && pma.min_entries(level) == mins[level] && pma.max_entries(level) == maxs[level];
    }
    report("threshold table (capacity 32)", ok);
}

void verify_engines() {
    std::map<std::uint64_t, std::uint64_t> oracle;
    PackedMemoryArray sequential;
    PackedMemoryArray lock_based;
    PackedMemoryArray segment_lazy;
    PackedMemoryArray segment_eager;
    std::mt19937_64 rng(12345);
    bool ok = true;
    for (int b = 0; b < 24 && ok; ++b) {
        std::vector<Update> batch;
        for (int i = 0; i < 512; ++i) {
            const std::uint64_t key = rng() % 60000;
            if (rng() % 3 == 0) batch.push_back(Update{key, 0, UpdateOp::kDelete});
            else batch.push_back(Update{key, rng(), UpdateOp::kInsert});
        }
        // Shared resolution: last insert wins, deletes-only means absent.
        std::map<std::uint64_t, std::optional<std::uint64_t>> resolved;
        for (const Update& u : batch) {
            auto& slot = resolved[u.key];
            if (u.op == UpdateOp::kInsert) slot = u.value;
            else if (!slot.has_value()) slot = std::nullopt;
        }
        for (const auto& [k, v] : resolved) {
            if (v.has_value()) {
                oracle[k] = *v;
                sequential.insert(k, *v);
            } else {
                oracle.erase(k);
                sequential.erase(k);
            }
        }
        LockEngineConfig lock_cfg;
        lock_cfg.workers = 2;
        batch_update_lockbased(lock_based, batch, lock_cfg);
        SegmentEngineConfig lazy_cfg;
        lazy_cfg.workers = 2;
        batch_update(segment_lazy, batch, lazy_cfg);
        SegmentEngineConfig eager_cfg;
        eager_cfg.deletion_mode = DeletionMode::kEager;
        eager_cfg.workers = 2;
        batch_update(segment_eager, batch, eager_cfg);

        for (const PackedMemoryArray* pma :
             {&sequential, &lock_based, &segment_lazy, &segment_eager}) {
            const auto entries = pma->to_entries();
            ok = ok && entries.size() == oracle.size();
            auto it = oracle.begin();
            for (std::size_t i = 0; ok && i < entries.size(); ++i, ++it) {
                ok = entries[i].key == it->first && entries[i].value == it->second;
            }
        }
    }
    report("engine/oracle equivalence (sequential, lock, segment lazy+eager)", ok);

    // Worker determinism.
    PackedMemoryArray base;
    for (int i = 0; i < 3000; ++i) base.insert(rng() % 90000, rng());
    std::vector<Update> batch;
    for (int i = 0; i < 2048; ++i) {
        const std::uint64_t key = rng() % 90000;
        if (rng() % 4 == 0) batch.push_back(Update{key, 0, UpdateOp::kDelete});
        else batch.push_back(Update{key, rng(), UpdateOp::kInsert});
    }
    std::vector<std::vector<Slot>> outputs;
    for (const unsigned workers : {1u, 2u, 8u}) {
        PackedMemoryArray pma = base;
        SegmentEngineConfig cfg;
        cfg.workers = workers;
        batch_update(pma, batch, cfg);
        outputs.push_back(pma.slots());
    }
    report("segment engine worker determinism", outputs[0] == outputs[1] && outputs[0] == outputs[2]);
}

void verify_graph_and_analytics() {
    const EdgeStream stream = gen_rmat(1 << 10, 1 << 14, {}, 5);
    auto [window, graph] = SlidingWindow::init_window(stream);
    std::map<std::pair<VertexId, VertexId>, double> oracle;
    for (std::size_t i = 0; i < window.window_size(); ++i) {
        oracle[{stream.edges[i].src, stream.edges[i].dst}] = stream.edges[i].weight;
    }
    bool ok = true;
    std::mt19937_64 rng(6);
    for (int s = 0; s < 50 && !window.exhausted(); ++s) {
        const SlideBatch slide = window.slide(128);
        graph.apply_batch(slide.inserts, slide.deletions);
        for (const auto& d : slide.deletions) oracle.erase(d);
        for (const auto& e : slide.inserts) oracle[{e.src, e.dst}] = e.weight;
    }
    const CsrSnapshot snap = graph.csr_snapshot();
    std::size_t idx = 0;
    ok = ok && snap.col_indices.size() == oracle.size();
    for (const auto& [key, w] : oracle) {
        if (!ok) break;
        ok = snap.col_indices[idx] == key.second && snap.values[idx] == w;
        ++idx;
    }
    report("graph snapshot equals from-scratch CSR after 50 slides", ok);

    const CsrView view(snap);
    const auto root = static_cast<std::uint32_t>(rng() % graph.num_vertices());
    const bool bfs_ok = bfs(graph, root) == bfs(view, root);
    const bool cc_ok = connected_components(graph) == connected_components(view);
    PageRankOptions opts;
    opts.epsilon = 0.0;
    opts.max_iters = 20;
    const auto live = pagerank(graph, opts).ranks;
    const auto ref = pagerank(view, opts).ranks;
    bool pr_ok = live.size() == ref.size();
    for (std::size_t v = 0; pr_ok && v < live.size(); ++v) pr_ok = std::abs(live[v] - ref[v]) <= 1e-9;
    report("analytics on the live view equal the snapshot", bfs_ok && cc_ok && pr_ok);
}

int run_verify() {
    verify_thresholds();
    verify_engines();
    verify_graph_and_analytics();
    std::printf("%s\n", failures == 0 ? "verification passed" : "verification FAILED");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic-graph stream benchmark harness"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "write a synthetic edge stream");
    std::string gen_kind = "rmat";
    std::size_t gen_vertices = std::size_t{1} << 17;
    std::size_t gen_edges = std::size_t{1} << 21;
    double gen_density = 0.0002;
    std::uint64_t gen_seed = 1;
    std::uint64_t shuffle_seed = 0;
    bool do_shuffle = false;
    std::string gen_out;
    std::string gen_format = "bin";
    gen->add_option("--kind", gen_kind, "rmat | er")->check(CLI::IsMember({"rmat", "er"}));
    gen->add_option("--vertices", gen_vertices, "vertex count (power of two for rmat)");
    gen->add_option("--edges", gen_edges, "edge count (rmat)");
    gen->add_option("--density", gen_density, "edge probability (er)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_flag("--shuffle", do_shuffle, "randomly reassign arrival timestamps");
    gen->add_option("--shuffle-seed", shuffle_seed, "seed for --shuffle");
    gen->add_option("--out", gen_out, "output path")->required();
    gen->add_option("--format", gen_format, "bin | txt")->check(CLI::IsMember({"bin", "txt"}));

    auto* bu = app.add_subcommand("bench-update", "update-latency sweep over batch sizes");
    std::string bu_dataset;
    std::vector<std::string> bu_containers = {"gpma-plus", "gpma-lock", "adjlists", "rebuild-csr"};
    std::string bu_batches;
    std::uint64_t bu_seed = 1;
    unsigned bu_workers = 1;
    bool bu_sorted = false;
    std::string bu_out;
    bu->add_option("--dataset", bu_dataset, "edge stream file (default: generated rmat)");
    bu->add_option("--container", bu_containers,
                   "containers: gpma-plus|gpma-lock|adjlists|rebuild-csr");
    bu->add_option("--batch-sizes", bu_batches, "comma list (default 1..16384, powers of two)");
    bu->add_option("--seed", bu_seed, "seed for the default dataset");
    bu->add_option("--workers", bu_workers, "segment engine worker count");
    bu->add_flag("--sorted", bu_sorted, "replay the stream in key order (worst case)");
    bu->add_option("--out", bu_out, "CSV output path (default stdout)");

    auto* ba = app.add_subcommand("bench-app", "per-slide application benchmark");
    std::string ba_dataset;
    std::string ba_app = "bfs";
    std::vector<std::string> ba_containers = {"gpma-plus", "rebuild-csr"};
    std::string ba_fractions = "0.0001,0.001,0.01";
    std::string ba_mode = "window";
    std::uint64_t ba_seed = 1;
    unsigned ba_workers = 1;
    std::string ba_out;
    ba->add_option("--dataset", ba_dataset, "edge stream file (default: generated rmat)");
    ba->add_option("--app", ba_app, "bfs | cc | pagerank")
        ->check(CLI::IsMember({"bfs", "cc", "pagerank"}));
    ba->add_option("--container", ba_containers, "containers to compare");
    ba->add_option("--slide-pct", ba_fractions, "slide sizes as fractions of |E|");
    ba->add_option("--mode", ba_mode, "window | explicit")
        ->check(CLI::IsMember({"window", "explicit"}));
    ba->add_option("--seed", ba_seed, "run seed");
    ba->add_option("--workers", ba_workers, "segment engine worker count");
    ba->add_option("--out", ba_out, "CSV output path (default stdout)");

    auto* ver = app.add_subcommand("verify", "run the built-in oracle suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            EdgeStream stream = gen_kind == "rmat"
                                    ? gen_rmat(gen_vertices, gen_edges, {}, gen_seed)
                                    : gen_erdos_renyi(gen_vertices, gen_density, gen_seed);
            if (do_shuffle) {
                stream = assign_random_timestamps(std::move(stream.edges), stream.num_vertices,
                                                  shuffle_seed);
            }
            if (gen_format == "bin") write_stream_binary(gen_out, stream);
            else write_stream_text(gen_out, stream);
            std::fprintf(stderr, "wrote %zu edges over %zu vertices to %s\n", stream.edges.size(),
                         stream.num_vertices, gen_out.c_str());
            return 0;
        }
        if (bu->parsed()) {
            const EdgeStream stream = load_or_generate(bu_dataset, bu_seed);
            UpdateBenchOptions opts;
            if (bu_batches.empty()) {
                for (std::size_t b = 1; b <= (std::size_t{1} << 14) && b <= stream.edges.size() / 2;
                     b <<= 1) {
                    opts.batch_sizes.push_back(b);
                }
            } else {
                opts.batch_sizes = parse_sizes(bu_batches);
            }
            opts.workers = bu_workers;
            opts.sorted_stream = bu_sorted;
            opts.dataset_name = bu_dataset.empty() ? "rmat-default" : bu_dataset;
            std::vector<ContainerKind> kinds;
            for (const std::string& name : bu_containers) kinds.push_back(parse_container(name));
            emit_csv(bu_out, bench_update(stream, kinds, opts));
            return 0;
        }
        if (ba->parsed()) {
            const EdgeStream stream = load_or_generate(ba_dataset, ba_seed);
            AppBenchOptions opts;
            opts.slide_fractions = parse_fractions(ba_fractions);
            opts.workers = ba_workers;
            opts.seed = ba_seed;
            opts.explicit_deletions = ba_mode == "explicit";
            opts.deletion_mode = opts.explicit_deletions ? DeletionMode::kEager : DeletionMode::kLazy;
            opts.dataset_name = ba_dataset.empty() ? "rmat-default" : ba_dataset;
            std::vector<ContainerKind> kinds;
            for (const std::string& name : ba_containers) kinds.push_back(parse_container(name));
            emit_csv(ba_out, bench_app(stream, kinds, parse_app(ba_app), opts));
            return 0;
        }
        if (ver->parsed()) return run_verify();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

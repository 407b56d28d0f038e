#pragma once

// File formats: key/value exports for the array (binary little-endian 64-bit
// pairs, plus a "key value" text form for debugging), edge streams as
// "src dst weight ts" text lines or packed 24-byte binary records, and
// result-vector exports. All numbers render locale-independent.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmagraph/pma.hpp"
#include "pmagraph/streaming.hpp"

namespace pmagraph {

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts are unsupported");

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// --- key/value pairs ------------------------------------------------------

inline void write_pairs_binary(const std::string& path, const std::vector<Entry>& pairs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const Entry& e : pairs) {
        out.write(reinterpret_cast<const char*>(&e.key), 8);
        out.write(reinterpret_cast<const char*>(&e.value), 8);
    }
}

inline std::vector<Entry> read_pairs_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Entry> pairs;
    Entry e;
    while (in.read(reinterpret_cast<char*>(&e.key), 8) && in.read(reinterpret_cast<char*>(&e.value), 8)) {
        pairs.push_back(e);
    }
    return pairs;
}

inline void write_pairs_text(const std::string& path, const std::vector<Entry>& pairs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const Entry& e : pairs) out << e.key << ' ' << e.value << '\n';
}

inline std::vector<Entry> read_pairs_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Entry> pairs;
    Entry e;
    while (in >> e.key >> e.value) pairs.push_back(e);
    return pairs;
}

// --- edge streams ---------------------------------------------------------

inline void write_stream_text(const std::string& path, const EdgeStream& stream) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# vertices " << stream.num_vertices << '\n';
    for (const TimestampedEdge& e : stream.edges) {
        out << e.src << ' ' << e.dst << ' ' << format_double(e.weight) << ' ' << e.ts << '\n';
    }
}

// Lines are "src dst [weight] [ts]"; missing weights default to 1, missing
// timestamps to the line index. A "# vertices N" header pins the vertex
// count, otherwise max id + 1 is used.
inline EdgeStream read_stream_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    EdgeStream stream;
    std::string line;
    std::uint64_t index = 0;
    std::size_t max_id = 0;
    bool have_vertices = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hdr(line.substr(1));
            std::string word;
            if (hdr >> word && word == "vertices" && hdr >> stream.num_vertices) have_vertices = true;
            continue;
        }
        std::istringstream ls(line);
        TimestampedEdge e;
        if (!(ls >> e.src >> e.dst)) throw std::runtime_error("bad edge line: " + line);
        e.weight = 1.0;
        e.ts = index;
        ls >> e.weight;
        ls >> e.ts;
        max_id = std::max({max_id, static_cast<std::size_t>(e.src), static_cast<std::size_t>(e.dst)});
        stream.edges.push_back(e);
        ++index;
    }
    if (!have_vertices) stream.num_vertices = stream.edges.empty() ? 0 : max_id + 1;
    return stream;
}

// Packed records: 64-bit edge key, 64-bit weight bits, 64-bit timestamp.
inline void write_stream_binary(const std::string& path, const EdgeStream& stream) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const std::uint64_t magic = 0x70676d6131ull;  // "pgma1"
    const std::uint64_t nv = stream.num_vertices;
    out.write(reinterpret_cast<const char*>(&magic), 8);
    out.write(reinterpret_cast<const char*>(&nv), 8);
    for (const TimestampedEdge& e : stream.edges) {
        const std::uint64_t key = EdgeKey::pack(e.src, e.dst);
        const std::uint64_t wbits = std::bit_cast<std::uint64_t>(e.weight);
        out.write(reinterpret_cast<const char*>(&key), 8);
        out.write(reinterpret_cast<const char*>(&wbits), 8);
        out.write(reinterpret_cast<const char*>(&e.ts), 8);
    }
}

inline EdgeStream read_stream_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t magic = 0;
    std::uint64_t nv = 0;
    if (!in.read(reinterpret_cast<char*>(&magic), 8) || magic != 0x70676d6131ull ||
        !in.read(reinterpret_cast<char*>(&nv), 8)) {
        throw std::runtime_error(path + " is not an edge-stream file");
    }
    EdgeStream stream;
    stream.num_vertices = nv;
    std::uint64_t key;
    std::uint64_t wbits;
    std::uint64_t ts;
    while (in.read(reinterpret_cast<char*>(&key), 8) && in.read(reinterpret_cast<char*>(&wbits), 8) &&
           in.read(reinterpret_cast<char*>(&ts), 8)) {
        stream.edges.push_back(TimestampedEdge{EdgeKey::src_of(key), EdgeKey::dst_of(key),
                                               std::bit_cast<double>(wbits), ts});
    }
    return stream;
}

inline EdgeStream read_stream(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("cannot open " + path);
    std::uint64_t magic = 0;
    probe.read(reinterpret_cast<char*>(&magic), 8);
    probe.close();
    return magic == 0x70676d6131ull ? read_stream_binary(path) : read_stream_text(path);
}

// --- result vectors -------------------------------------------------------

template <typename T>
void write_vector_text(const std::string& path, const std::vector<T>& v) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const T& x : v) {
        if constexpr (std::is_floating_point_v<T>) out << format_double(x) << '\n';
        else out << x << '\n';
    }
}

template <typename T>
void write_vector_binary(const std::string& path, const std::vector<T>& v) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

}  // namespace pmagraph

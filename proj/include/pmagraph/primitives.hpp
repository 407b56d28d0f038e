#pragma once

// Deterministic data-parallel building blocks shared by the batch engines:
// stable key sort, run-length encoding, exclusive scan, segmented counting.
// All functions are pure; results are identical for any worker count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pmagraph {

struct RleResult {
    std::vector<std::uint64_t> unique_values;
    std::vector<std::size_t> run_lengths;
};

// Stable ascending sort by 64-bit key. LSD radix, 8-bit digits; payloads move
// with their keys so equal keys keep arrival order.
template <typename T, typename KeyFn>
void sort_by_key(std::vector<T>& items, KeyFn key_of) {
    const std::size_t n = items.size();
    if (n < 2) return;
    // Small inputs: a comparison sort beats eight counting passes.
    if (n < 64) {
        std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) {
            return key_of(a) < key_of(b);
        });
        return;
    }
    std::vector<T> scratch(n);
    T* src = items.data();
    T* dst = scratch.data();
    for (int pass = 0; pass < 8; ++pass) {
        const int shift = pass * 8;
        // Skip passes where every key shares the same digit.
        std::size_t counts[257] = {};
        for (std::size_t i = 0; i < n; ++i) {
            counts[((key_of(src[i]) >> shift) & 0xffu) + 1]++;
        }
        bool trivial = false;
        for (int d = 0; d < 256; ++d) {
            if (counts[d + 1] == n) { trivial = true; break; }
        }
        if (trivial) continue;
        for (int d = 0; d < 256; ++d) counts[d + 1] += counts[d];
        for (std::size_t i = 0; i < n; ++i) {
            dst[counts[(key_of(src[i]) >> shift) & 0xffu]++] = src[i];
        }
        std::swap(src, dst);
    }
    if (src != items.data()) {
        std::copy(src, src + n, items.data());
    }
}

inline void sort_pairs_by_key(std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
    sort_by_key(pairs, [](const auto& p) { return p.first; });
}

inline RleResult run_length_encode(const std::vector<std::uint64_t>& values) {
    RleResult out;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        while (j < values.size() && values[j] == values[i]) ++j;
        out.unique_values.push_back(values[i]);
        out.run_lengths.push_back(j - i);
        i = j;
    }
    return out;
}

// out[0] = 0, out[i] = out[i-1] + in[i-1].
inline std::vector<std::size_t> exclusive_scan(const std::vector<std::size_t>& counts) {
    std::vector<std::size_t> out(counts.size());
    std::size_t acc = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out[i] = acc;
        acc += counts[i];
    }
    return out;
}

// Number of slots in [begin, end) for which is_valid reports true.
template <typename SlotIt, typename ValidFn>
std::size_t count_valid(SlotIt begin, SlotIt end, ValidFn is_valid) {
    std::size_t n = 0;
    for (SlotIt it = begin; it != end; ++it) {
        if (is_valid(*it)) ++n;
    }
    return n;
}

}  // namespace pmagraph

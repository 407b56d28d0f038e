#pragma once

// Shared 32-slot reference state used across the suites. Capacity 32, leaf
// size 4, height 3, 18 entries. The per-leaf occupancies pin down every
// documented behaviour of the worked examples:
//   leaf 0 [0,3]    {2}            sparse leaf; keys 1 and 4 both map here
//   leaf 1 [4,7]    {8,10,11}      full leaf; key 9 maps here
//   leaf 2 [8,11]   {14,17}
//   leaf 3 [12,15]  {20,25}
//   leaf 4 [16,19]  {30,33,36}     full leaf; key 35 maps here
//   leaf 5 [20,23]  {40,45,50}     full leaf; key 48 maps here
//   leaf 6 [24,27]  {60,70}
//   leaf 7 [28,31]  {80,90}
// Inserting 48 overflows leaf 5 (4 > 3) and its parent [16,23] (7 > 6) and
// lands in segment-[16,31] (12 <= 12), whose 11 entries re-dispatch evenly.

#include <cstdint>
#include <tuple>
#include <vector>

#include "pmagraph/pma.hpp"

namespace pmagraph::testing {

inline std::uint64_t fixture_value(std::uint64_t key) { return key * 10; }

inline const std::vector<std::uint64_t>& fixture_keys() {
    static const std::vector<std::uint64_t> keys = {2,  8,  10, 11, 14, 17, 20, 25, 30,
                                                    33, 36, 40, 45, 50, 60, 70, 80, 90};
    return keys;
}

inline PackedMemoryArray make_reference_pma() {
    std::vector<std::tuple<std::size_t, std::uint64_t, std::uint64_t>> placements;
    const std::size_t slots[] = {0, 4, 5, 6, 8, 9, 12, 13, 16, 17, 18, 20, 21, 22, 24, 25, 28, 29};
    const auto& keys = fixture_keys();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        placements.emplace_back(slots[i], keys[i], fixture_value(keys[i]));
    }
    return PackedMemoryArray::from_slot_layout(32, placements);
}

// Slot layout of segment-[16,31] after inserting key 48: eleven entries at
// positions 16 + floor(j*16/11).
inline std::vector<std::pair<std::size_t, std::uint64_t>> expected_after_insert_48() {
    return {{16, 30}, {17, 33}, {18, 36}, {20, 40}, {21, 45}, {23, 48},
            {24, 50}, {26, 60}, {27, 70}, {29, 80}, {30, 90}};
}

}  // namespace pmagraph::testing

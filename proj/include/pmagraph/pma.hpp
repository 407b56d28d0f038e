#pragma once

// Packed Memory Array: sorted 64-bit keys kept in a slot array with bounded
// gaps. The array is overlaid with an implicit complete binary tree of
// segments; every level carries density bounds and an insert/delete that
// pushes a segment out of bounds rebalances the nearest legal ancestor,
// growing or shrinking the whole array at the root.
//
// Concurrency: single writer. The batch engines (lock_engine.hpp,
// segment_engine.hpp) take exclusive ownership of the array for a whole batch
// and internally write only pairwise-disjoint segments, which is why the
// occupancy counters below are atomics.

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pmagraph/primitives.hpp"

namespace pmagraph {

enum class SlotState : std::uint8_t { kEmpty = 0, kValid = 1, kTombstone = 2 };

// A tombstone keeps its key (segment-first-key searches stay monotone) but is
// excluded from the valid-entry set; empty slots are fully zeroed so slot
// arrays compare bytewise.
struct Slot {
    std::uint64_t key = 0;
    std::uint64_t value = 0;
    SlotState state = SlotState::kEmpty;

    friend bool operator==(const Slot&, const Slot&) = default;
};

struct Entry {
    std::uint64_t key = 0;
    std::uint64_t value = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
};

// Per-level density bounds, linearly interpolated between the leaf and root
// endpoints. Defaults reproduce the classic 4-level table
// (rho 0.08..0.40 increasing, tau 0.92..0.80 decreasing).
struct DensityProfile {
    double leaf_lower = 0.08;
    double leaf_upper = 0.92;
    double root_lower = 0.40;
    double root_upper = 0.80;
    bool allow_shrink = true;

    void validate() const {
        if (!(leaf_lower > 0.0 && leaf_lower < root_lower && root_lower < root_upper &&
              root_upper < leaf_upper && leaf_upper < 1.0)) {
            throw std::invalid_argument("DensityProfile: need 0 < leaf_lower < root_lower < root_upper < leaf_upper < 1");
        }
        if (2.0 * root_lower > root_upper + 1e-12) {
            throw std::invalid_argument("DensityProfile: need 2*root_lower <= root_upper so a post-shrink root is legal");
        }
    }

    double lower_at(int level, int height) const {
        if (height == 0) return root_lower;
        return leaf_lower + (root_lower - leaf_lower) * static_cast<double>(level) / height;
    }

    double upper_at(int level, int height) const {
        if (height == 0) return root_upper;
        return leaf_upper + (root_upper - leaf_upper) * static_cast<double>(level) / height;
    }
};

// Slot-array geometry. capacity = leaf_size * 2^height; segment (l, i)
// occupies slots [i * seg_size(l), (i+1) * seg_size(l)).
class PmaLayout {
public:
    PmaLayout() : PmaLayout(16) {}

    explicit PmaLayout(std::size_t capacity)
        : capacity_(capacity), leaf_size_(leaf_size_for(capacity)) {
        assert(capacity >= 4 && (capacity & (capacity - 1)) == 0);
        height_ = 0;
        for (std::size_t s = leaf_size_; s < capacity_; s <<= 1) ++height_;
    }

    // Leaf segments are Theta(log capacity) slots: the largest power of two
    // not above floor(log2(capacity)), never below 4.
    static std::size_t leaf_size_for(std::size_t capacity) {
        int log2cap = 0;
        while ((std::size_t{1} << (log2cap + 1)) <= capacity) ++log2cap;
        std::size_t leaf = 4;
        while (leaf * 2 <= static_cast<std::size_t>(log2cap)) leaf *= 2;
        return leaf;
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t leaf_size() const { return leaf_size_; }
    int height() const { return height_; }

    std::size_t seg_size(int level) const { return leaf_size_ << level; }
    std::size_t num_segments(int level) const { return capacity_ >> (level + log2_leaf()); }
    std::size_t seg_begin(int level, std::size_t index) const { return index * seg_size(level); }
    std::size_t num_leaves() const { return capacity_ / leaf_size_; }
    std::size_t leaf_of_slot(std::size_t slot) const { return slot / leaf_size_; }

private:
    int log2_leaf() const {
        int b = 0;
        while ((leaf_size_ >> b) > 1) ++b;
        return b;
    }

    std::size_t capacity_ = 16;
    std::size_t leaf_size_ = 4;
    int height_ = 2;
};

class PackedMemoryArray {
public:
    static constexpr std::size_t kMinCapacity = 16;

    explicit PackedMemoryArray(DensityProfile profile = {}) : profile_(profile) {
        profile_.validate();
        reset_layout(kMinCapacity);
    }

    PackedMemoryArray(const PackedMemoryArray& other)
        : profile_(other.profile_),
          layout_(other.layout_),
          slots_(other.slots_),
          min_entries_(other.min_entries_),
          max_entries_(other.max_entries_),
          valid_count_(other.valid_count_.load(std::memory_order_relaxed)),
          tombstone_count_(other.tombstone_count_.load(std::memory_order_relaxed)),
          slot_writes_(other.slot_writes_.load(std::memory_order_relaxed)) {}

    PackedMemoryArray& operator=(const PackedMemoryArray& other) {
        if (this == &other) return *this;
        profile_ = other.profile_;
        layout_ = other.layout_;
        slots_ = other.slots_;
        min_entries_ = other.min_entries_;
        max_entries_ = other.max_entries_;
        valid_count_.store(other.valid_count_.load(std::memory_order_relaxed), std::memory_order_relaxed);
        tombstone_count_.store(other.tombstone_count_.load(std::memory_order_relaxed), std::memory_order_relaxed);
        slot_writes_.store(other.slot_writes_.load(std::memory_order_relaxed), std::memory_order_relaxed);
        return *this;
    }

    // Builds the smallest legal array holding `sorted` (strictly increasing
    // keys) with global density not above fill_target where both constraints
    // can be met; legality wins when they conflict.
    static PackedMemoryArray from_sorted(std::span<const Entry> sorted, double fill_target,
                                         DensityProfile profile = {}) {
        profile.validate();
        if (!(fill_target > 0.0 && fill_target <= profile.leaf_upper + 1e-12)) {
            throw std::invalid_argument("from_sorted: fill_target must be in (0, leaf_upper]");
        }
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i].key <= sorted[i - 1].key) {
                throw std::invalid_argument(
                    "from_sorted: keys must be strictly increasing (duplicate or unsorted input at index " +
                    std::to_string(i) + ")");
            }
        }
        PackedMemoryArray pma(profile);
        const std::size_t n = sorted.size();
        std::size_t cap = kMinCapacity;
        while (static_cast<double>(n) > fill_target * static_cast<double>(cap)) cap <<= 1;
        pma.reset_layout(cap);
        while (n > pma.max_entries(pma.layout_.height())) {
            pma.reset_layout(pma.layout_.capacity() << 1);
        }
        while (pma.layout_.capacity() > kMinCapacity && n < pma.min_entries(pma.layout_.height()) &&
               n <= pma.max_entries_at_capacity(pma.layout_.capacity() >> 1)) {
            pma.reset_layout(pma.layout_.capacity() >> 1);
        }
        if (n > 0) pma.place_evenly(pma.layout_.height(), 0, sorted);
        return pma;
    }

    // Direct slot placement for fixtures and debugging; placements are
    // (slot, key, value) with keys increasing in slot order.
    static PackedMemoryArray from_slot_layout(std::size_t capacity,
                                              std::span<const std::tuple<std::size_t, std::uint64_t, std::uint64_t>> placements,
                                              DensityProfile profile = {}) {
        PackedMemoryArray pma(profile);
        pma.reset_layout(capacity);
        std::uint64_t last_key = 0;
        bool first = true;
        for (const auto& [slot, key, value] : placements) {
            if (slot >= capacity) throw std::invalid_argument("from_slot_layout: slot out of range");
            if (!first && key <= last_key) throw std::invalid_argument("from_slot_layout: keys must increase in slot order");
            first = false;
            last_key = key;
            pma.slots_[slot] = Slot{key, value, SlotState::kValid};
        }
        pma.valid_count_.store(placements.size(), std::memory_order_relaxed);
        return pma;
    }

    const PmaLayout& layout() const { return layout_; }
    const DensityProfile& profile() const { return profile_; }
    std::size_t capacity() const { return layout_.capacity(); }
    std::size_t valid_count() const { return valid_count_.load(std::memory_order_relaxed); }
    std::size_t tombstone_count() const { return tombstone_count_.load(std::memory_order_relaxed); }
    const std::vector<Slot>& slots() const { return slots_; }

    // Interpolated (rho, tau) for a tree level; level height() is the root.
    std::pair<double, double> thresholds(int level) const {
        check_level(level);
        return {profile_.lower_at(level, layout_.height()), profile_.upper_at(level, layout_.height())};
    }

    std::size_t min_entries(int level) const {
        check_level(level);
        return min_entries_[static_cast<std::size_t>(level)];
    }

    std::size_t max_entries(int level) const {
        check_level(level);
        return max_entries_[static_cast<std::size_t>(level)];
    }

    // Leaf whose key range covers `key`: the last leaf whose first non-empty
    // key is <= key; keys below all content (and the empty array) map to 0.
    std::size_t binary_search_leaf(std::uint64_t key) const {
        std::size_t begin = 0;
        std::size_t len = layout_.capacity();
        while (len > layout_.leaf_size()) {
            const std::size_t half = len / 2;
            const std::size_t mid = begin + half;
            const std::optional<std::uint64_t> right_first = first_key_in(mid, begin + len);
            if (right_first.has_value() && *right_first <= key) begin = mid;
            len = half;
        }
        return begin / layout_.leaf_size();
    }

    std::optional<std::uint64_t> search(std::uint64_t key) const {
        const std::optional<std::size_t> slot = find_slot(key);
        if (!slot.has_value() || slots_[*slot].state != SlotState::kValid) return std::nullopt;
        return slots_[*slot].value;
    }

    // Leaf assignment for a sorted key list: equivalent to binary_search_leaf
    // per key, but walks the leaf headers monotonically (falling back to a
    // binary descent across long gaps) so a batch costs one forward pass
    // instead of one random tree descent per key. Empty leaves are stepped
    // over; they are never an answer except leaf 0.
    void assign_leaves_sorted(std::span<const std::uint64_t> keys, std::span<std::size_t> out) const {
        assert(keys.size() == out.size());
        if (keys.empty()) return;
        const std::size_t leaves = layout_.num_leaves();
        std::size_t leaf = binary_search_leaf(keys[0]);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            assert(i == 0 || keys[i] >= keys[i - 1]);
            int probes = 0;
            while (true) {
                std::size_t next = leaf + 1;
                std::optional<std::uint64_t> fk;
                while (next < leaves && probes < 16) {
                    const std::size_t b = layout_.seg_begin(0, next);
                    fk = first_key_in(b, b + layout_.leaf_size());
                    ++probes;
                    if (fk.has_value()) break;
                    ++next;
                }
                if (next >= leaves || (fk.has_value() && *fk > keys[i])) break;
                if (!fk.has_value()) {  // probe budget hit inside an empty run
                    leaf = binary_search_leaf(keys[i]);
                    break;
                }
                leaf = next;
                if (probes >= 16) {
                    leaf = binary_search_leaf(keys[i]);
                    break;
                }
            }
            out[i] = leaf;
        }
    }

    // Inserts key (overwriting the value in place when the key exists, or
    // reviving a tombstone). Otherwise rebalances the nearest ancestor whose
    // upper bound still holds after the insertion, doubling at the root.
    void insert(std::uint64_t key, std::uint64_t value) {
        if (const std::optional<std::size_t> slot = find_slot(key); slot.has_value()) {
            Slot& s = slots_[*slot];
            if (s.state == SlotState::kTombstone) {
                s.state = SlotState::kValid;
                tombstone_count_.fetch_sub(1, std::memory_order_relaxed);
                valid_count_.fetch_add(1, std::memory_order_relaxed);
            }
            s.value = value;
            slot_writes_.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        while (true) {
            std::size_t seg = binary_search_leaf(key);
            int level = 0;
            bool placed = false;
            while (true) {
                const auto [b, e] = seg_range(level, seg);
                const std::size_t n = count_valid_in(b, e);
                if (n + 1 <= max_entries(level)) {
                    merge_buf_.clear();
                    collect_valid(b, e, merge_buf_);
                    const auto pos = std::lower_bound(merge_buf_.begin(), merge_buf_.end(), key,
                                                      [](const Entry& a, std::uint64_t k) { return a.key < k; });
                    merge_buf_.insert(pos, Entry{key, value});
                    place_evenly(level, seg, merge_buf_);
                    placed = true;
                    break;
                }
                if (level == layout_.height()) break;
                seg >>= 1;
                ++level;
            }
            if (placed) return;
            grow_root();
        }
    }

    // Removes key if present; rebalances the nearest ancestor whose lower
    // bound still holds after the removal, halving at the root. The dual of
    // insert.
    bool erase(std::uint64_t key) {
        const std::optional<std::size_t> slot = find_slot(key);
        if (!slot.has_value() || slots_[*slot].state != SlotState::kValid) return false;
        std::size_t seg = layout_.leaf_of_slot(*slot);
        int level = 0;
        while (true) {
            const auto [b, e] = seg_range(level, seg);
            const std::size_t n = count_valid_in(b, e);
            const bool bottom_ok = n - 1 >= min_entries(level) || layout_.capacity() == kMinCapacity ||
                                   (!profile_.allow_shrink && level == layout_.height());
            if (bottom_ok) {
                merge_buf_.clear();
                collect_valid(b, e, merge_buf_);
                remove_key(merge_buf_, key);
                place_evenly(level, seg, merge_buf_);
                return true;
            }
            if (level == layout_.height()) {
                clear_slot(*slot);
                shrink_root();
                return true;
            }
            seg >>= 1;
            ++level;
        }
    }

    // Re-dispatches segment (level, seg_index) evenly after merging `extra`
    // (sorted pending entries; keys either new or overwriting). Tombstones in
    // the segment are discarded.
    void redispatch(int level, std::size_t seg_index, std::span<const Entry> extra) {
        check_level(level);
        const auto [b, e] = seg_range(level, seg_index);
        if (count_valid_in(b, e) + extra.size() > max_entries(level)) {
            throw std::logic_error("redispatch: segment capacity violation (caller must check tau)");
        }
        merge_buf_.clear();
        collect_valid(b, e, merge_buf_);
        std::vector<Entry> merged;
        merged.reserve(merge_buf_.size() + extra.size());
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < merge_buf_.size() || j < extra.size()) {
            if (j == extra.size() || (i < merge_buf_.size() && merge_buf_[i].key < extra[j].key)) {
                merged.push_back(merge_buf_[i++]);
            } else {
                if (i < merge_buf_.size() && merge_buf_[i].key == extra[j].key) ++i;  // overwrite
                merged.push_back(extra[j++]);
            }
        }
        place_evenly(level, seg_index, merged);
    }

    // Doubles the slot array and re-dispatches every entry; leaf size and
    // thresholds are re-derived for the new capacity.
    void grow_root() { rebuild_at_capacity(layout_.capacity() << 1); }

    // Halves while the root sits below its lower bound; no-op at minimum
    // capacity or when shrinking is disabled.
    bool shrink_root() {
        if (!profile_.allow_shrink) return false;
        bool shrunk = false;
        while (layout_.capacity() > kMinCapacity && valid_count() < min_entries(layout_.height())) {
            rebuild_at_capacity(layout_.capacity() >> 1);
            shrunk = true;
        }
        return shrunk;
    }

    template <typename Fn>
    void for_each_valid(Fn&& fn) const {
        for (const Slot& s : slots_) {
            if (s.state == SlotState::kValid) fn(s.key, s.value);
        }
    }

    std::vector<Entry> to_entries() const {
        std::vector<Entry> out;
        out.reserve(valid_count());
        for_each_valid([&](std::uint64_t k, std::uint64_t v) { out.push_back(Entry{k, v}); });
        return out;
    }

    // --- engine-facing pieces -------------------------------------------

    std::pair<std::size_t, std::size_t> seg_range(int level, std::size_t seg_index) const {
        const std::size_t b = layout_.seg_begin(level, seg_index);
        return {b, b + layout_.seg_size(level)};
    }

    std::size_t count_valid_in(std::size_t begin, std::size_t end) const {
        return count_valid(slots_.begin() + static_cast<std::ptrdiff_t>(begin),
                           slots_.begin() + static_cast<std::ptrdiff_t>(end),
                           [](const Slot& s) { return s.state == SlotState::kValid; });
    }

    void collect_valid(std::size_t begin, std::size_t end, std::vector<Entry>& out) const {
        for (std::size_t i = begin; i < end; ++i) {
            if (slots_[i].state == SlotState::kValid) out.push_back(Entry{slots_[i].key, slots_[i].value});
        }
    }

    // Rewrites segment (level, seg_index) to hold exactly `entries` (sorted),
    // entry j landing on slot floor(j*m/k). The single compaction point:
    // previous contents, tombstones included, are dropped.
    void place_evenly(int level, std::size_t seg_index, std::span<const Entry> entries) {
        const auto [b, e] = seg_range(level, seg_index);
        const std::size_t m = e - b;
        const std::size_t k = entries.size();
        assert(k <= m);
        std::size_t old_valid = 0;
        std::size_t old_tomb = 0;
        for (std::size_t i = b; i < e; ++i) {
            old_valid += slots_[i].state == SlotState::kValid;
            old_tomb += slots_[i].state == SlotState::kTombstone;
        }
        std::size_t j = 0;
        std::size_t next = k > 0 ? b : e;
        for (std::size_t i = b; i < e; ++i) {
            if (i == next && j < k) {
                assert(j == 0 || entries[j].key > entries[j - 1].key);
                slots_[i] = Slot{entries[j].key, entries[j].value, SlotState::kValid};
                ++j;
                next = j < k ? b + j * m / k : e;
            } else {
                slots_[i] = Slot{};
            }
        }
        valid_count_.fetch_add(k, std::memory_order_relaxed);
        valid_count_.fetch_sub(old_valid, std::memory_order_relaxed);
        tombstone_count_.fetch_sub(old_tomb, std::memory_order_relaxed);
        slot_writes_.fetch_add(m, std::memory_order_relaxed);
    }

    // Lazy-deletion write: flips the key's slot to a tombstone without any
    // rebalancing; reclaimed by the next place_evenly over the slot.
    bool mark_tombstone(std::uint64_t key) {
        const std::optional<std::size_t> slot = find_slot(key);
        if (!slot.has_value() || slots_[*slot].state != SlotState::kValid) return false;
        slots_[*slot].state = SlotState::kTombstone;
        valid_count_.fetch_sub(1, std::memory_order_relaxed);
        tombstone_count_.fetch_add(1, std::memory_order_relaxed);
        slot_writes_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }

    // Value overwrite at a known slot (reviving a tombstone); the slot index
    // must come from a find_slot call that no rewrite has invalidated.
    void overwrite_slot(std::size_t slot, std::uint64_t value) {
        Slot& s = slots_[slot];
        assert(s.state != SlotState::kEmpty);
        if (s.state == SlotState::kTombstone) {
            s.state = SlotState::kValid;
            tombstone_count_.fetch_sub(1, std::memory_order_relaxed);
            valid_count_.fetch_add(1, std::memory_order_relaxed);
        }
        s.value = value;
        slot_writes_.fetch_add(1, std::memory_order_relaxed);
    }

    bool mark_tombstone_at(std::size_t slot) {
        Slot& s = slots_[slot];
        if (s.state != SlotState::kValid) return false;
        s.state = SlotState::kTombstone;
        valid_count_.fetch_sub(1, std::memory_order_relaxed);
        tombstone_count_.fetch_add(1, std::memory_order_relaxed);
        slot_writes_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }

    // Raw slot access for the batch engines' in-place merge path. Callers own
    // a disjoint segment for the duration of the rewrite and must settle the
    // counters through account_rewrite afterwards.
    std::span<Slot> mutable_slots() { return slots_; }

    void account_rewrite(std::size_t new_valid, std::size_t old_valid, std::size_t old_tombstones,
                         std::uint64_t writes) {
        valid_count_.fetch_add(new_valid, std::memory_order_relaxed);
        valid_count_.fetch_sub(old_valid, std::memory_order_relaxed);
        tombstone_count_.fetch_sub(old_tombstones, std::memory_order_relaxed);
        slot_writes_.fetch_add(writes, std::memory_order_relaxed);
    }

    // Slot holding `key` in any non-empty state, if present.
    std::optional<std::size_t> find_slot(std::uint64_t key) const {
        if (valid_count() + tombstone_count() == 0) return std::nullopt;
        const std::size_t leaf = binary_search_leaf(key);
        const auto [b, e] = seg_range(0, leaf);
        for (std::size_t i = b; i < e; ++i) {
            if (slots_[i].state != SlotState::kEmpty && slots_[i].key == key) return i;
        }
        return std::nullopt;
    }

    std::uint64_t slot_writes() const { return slot_writes_.load(std::memory_order_relaxed); }
    void reset_slot_writes() { slot_writes_.store(0, std::memory_order_relaxed); }

private:
    void check_level(int level) const {
        if (level < 0 || level > layout_.height()) {
            throw std::out_of_range("level " + std::to_string(level) + " outside [0, " +
                                    std::to_string(layout_.height()) + "]");
        }
    }

    std::optional<std::uint64_t> first_key_in(std::size_t begin, std::size_t end) const {
        for (std::size_t i = begin; i < end; ++i) {
            if (slots_[i].state != SlotState::kEmpty) return slots_[i].key;
        }
        return std::nullopt;
    }

    static void remove_key(std::vector<Entry>& entries, std::uint64_t key) {
        const auto it = std::lower_bound(entries.begin(), entries.end(), key,
                                         [](const Entry& a, std::uint64_t k) { return a.key < k; });
        assert(it != entries.end() && it->key == key);
        entries.erase(it);
    }

    void clear_slot(std::size_t slot) {
        if (slots_[slot].state == SlotState::kValid) valid_count_.fetch_sub(1, std::memory_order_relaxed);
        if (slots_[slot].state == SlotState::kTombstone) tombstone_count_.fetch_sub(1, std::memory_order_relaxed);
        slots_[slot] = Slot{};
        slot_writes_.fetch_add(1, std::memory_order_relaxed);
    }

    void reset_layout(std::size_t capacity) {
        layout_ = PmaLayout(capacity);
        slots_.assign(capacity, Slot{});
        valid_count_.store(0, std::memory_order_relaxed);
        tombstone_count_.store(0, std::memory_order_relaxed);
        rebuild_bounds();
    }

    // Integer per-level bounds: the leaf bounds ceil(rho_0 * leaf) and
    // floor(tau_0 * leaf), doubled per level. Exact doubling makes the bounds
    // self-consistent under even re-dispatch: a segment can only sit at its
    // bound when every descendant sits at its own, so the bottom-up walks
    // escalate past saturated ancestors and every level stays in range after
    // every completed operation. (Per-level rounding of the interpolated
    // thresholds would lose that property and drift from the reference
    // table, which itself doubles: 1/2/4/8 and 3/6/12/24 for capacity 32.)
    void rebuild_bounds() {
        const int h = layout_.height();
        min_entries_.assign(static_cast<std::size_t>(h) + 1, 0);
        max_entries_.assign(static_cast<std::size_t>(h) + 1, 0);
        const auto leaf = static_cast<double>(layout_.leaf_size());
        const auto mn0 = static_cast<std::size_t>(std::ceil(profile_.leaf_lower * leaf - 1e-9));
        const auto mx0 = static_cast<std::size_t>(std::floor(profile_.leaf_upper * leaf + 1e-9));
        for (int l = 0; l <= h; ++l) {
            min_entries_[static_cast<std::size_t>(l)] = mn0 << l;
            max_entries_[static_cast<std::size_t>(l)] = mx0 << l;
        }
    }

    std::size_t max_entries_at_capacity(std::size_t capacity) const {
        const PmaLayout lay(capacity);
        const auto leaf = static_cast<double>(lay.leaf_size());
        const auto mx0 = static_cast<std::size_t>(std::floor(profile_.leaf_upper * leaf + 1e-9));
        return mx0 << lay.height();
    }

    void rebuild_at_capacity(std::size_t capacity) {
        std::vector<Entry> all = to_entries();
        reset_layout(capacity);
        if (!all.empty()) place_evenly(layout_.height(), 0, all);
    }

    DensityProfile profile_;
    PmaLayout layout_;
    std::vector<Slot> slots_;
    std::vector<std::size_t> min_entries_;
    std::vector<std::size_t> max_entries_;
    std::atomic<std::size_t> valid_count_{0};
    std::atomic<std::size_t> tombstone_count_{0};
    std::atomic<std::uint64_t> slot_writes_{0};
    std::vector<Entry> merge_buf_;  // single-writer scratch for sequential ops
};

}  // namespace pmagraph

#include "pmagraph/primitives.hpp"

#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

using namespace pmagraph;

TEST_CASE("sort_by_key handles empty and trivial inputs") {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> v;
    sort_pairs_by_key(v);
    CHECK(v.empty());
}

TEST_CASE("sort_by_key is stable") {
    std::vector<std::pair<std::uint64_t, char>> v = {{3, 'a'}, {1, 'b'}, {3, 'c'}};
    sort_by_key(v, [](const auto& p) { return p.first; });
    REQUIRE(v.size() == 3);
    CHECK(v[0] == std::pair<std::uint64_t, char>{1, 'b'});
    CHECK(v[1] == std::pair<std::uint64_t, char>{3, 'a'});
    CHECK(v[2] == std::pair<std::uint64_t, char>{3, 'c'});
}

TEST_CASE("sort_by_key matches a comparison sort on random keys") {
    std::mt19937_64 rng(7);
    for (const std::size_t n : {63u, 1000u, 100000u}) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = {rng(), i};
        auto expected = v;
        std::stable_sort(expected.begin(), expected.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        sort_pairs_by_key(v);
        CHECK(v == expected);
    }
}

TEST_CASE("sort_by_key stability on many duplicate keys") {
    std::mt19937_64 rng(11);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> v(5000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {rng() % 17, i};
    auto expected = v;
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    sort_pairs_by_key(v);
    CHECK(v == expected);
}

TEST_CASE("run_length_encode basics") {
    CHECK(run_length_encode({}).unique_values.empty());

    const RleResult single = run_length_encode({5, 5, 5});
    CHECK(single.unique_values == std::vector<std::uint64_t>{5});
    CHECK(single.run_lengths == std::vector<std::size_t>{3});

    const RleResult mixed = run_length_encode({1, 1, 2, 3, 3});
    CHECK(mixed.unique_values == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(mixed.run_lengths == std::vector<std::size_t>{2, 1, 2});
}

TEST_CASE("run_length_encode reconstruction property") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::uint64_t> input;
        std::uint64_t v = 0;
        while (input.size() < 500) {
            v += rng() % 3;  // sorted with runs
            input.push_back(v);
        }
        const RleResult rle = run_length_encode(input);
        std::vector<std::uint64_t> rebuilt;
        std::size_t total = 0;
        for (std::size_t i = 0; i < rle.unique_values.size(); ++i) {
            total += rle.run_lengths[i];
            for (std::size_t k = 0; k < rle.run_lengths[i]; ++k) rebuilt.push_back(rle.unique_values[i]);
        }
        CHECK(total == input.size());
        CHECK(rebuilt == input);
    }
}

TEST_CASE("exclusive_scan basics and oracle") {
    CHECK(exclusive_scan({}).empty());
    CHECK(exclusive_scan({2, 1, 2}) == std::vector<std::size_t>{0, 2, 3});

    std::mt19937_64 rng(17);
    std::vector<std::size_t> counts(300);
    for (auto& c : counts) c = rng() % 10;
    const auto scanned = exclusive_scan(counts);
    std::size_t acc = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        CHECK(scanned[i] == acc);
        acc += counts[i];
    }
}

TEST_CASE("scan of run lengths gives run start indices") {
    const std::vector<std::uint64_t> input = {4, 4, 4, 7, 9, 9};
    const RleResult rle = run_length_encode(input);
    const auto starts = exclusive_scan(rle.run_lengths);
    REQUIRE(starts.size() == rle.unique_values.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        CHECK(input[starts[i]] == rle.unique_values[i]);
        CHECK((starts[i] == 0 || input[starts[i] - 1] != rle.unique_values[i]));
    }
}

TEST_CASE("count_valid counts a predicate over a range") {
    const std::vector<int> empty_range(16, 0);
    CHECK(count_valid(empty_range.begin(), empty_range.end(), [](int x) { return x != 0; }) == 0);

    std::mt19937_64 rng(23);
    std::vector<int> range(256);
    std::size_t expected = 0;
    for (auto& x : range) {
        x = static_cast<int>(rng() % 3);
        expected += x == 1;
    }
    CHECK(count_valid(range.begin(), range.end(), [](int x) { return x == 1; }) == expected);
}

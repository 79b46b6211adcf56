// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "ember/ordering.h"

using namespace ember;

namespace {

// Independent oracle: BFS over (buffer contents, covered pair set) states to
// find the true minimum number of swaps for which every partition pair is
// co-resident at least once. Feasible for p <= 5, c <= 3.
std::uint64_t brute_force_min_swaps(std::uint32_t p, std::uint32_t c) {
    const std::uint32_t num_pairs = p * (p - 1) / 2;
    auto pair_bit = [&](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        std::uint32_t idx = 0;
        for (std::uint32_t i = 0; i < a; ++i) idx += p - 1 - i;
        idx += b - a - 1;
        return 1u << idx;
    };
    const std::uint32_t all_pairs = num_pairs == 0 ? 0 : (1u << num_pairs) - 1;

    std::vector<std::vector<std::uint32_t>> buffers;  // all c-subsets as sorted id lists
    std::vector<std::uint32_t> subset(c);
    auto rec = [&](auto&& self, std::uint32_t start, std::uint32_t depth) -> void {
        if (depth == c) {
            buffers.push_back(subset);
            return;
        }
        for (std::uint32_t v = start; v < p; ++v) {
            subset[depth] = v;
            self(self, v + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);

    auto covered_in = [&](const std::vector<std::uint32_t>& buf) {
        std::uint32_t mask = 0;
        for (std::size_t a = 0; a < buf.size(); ++a) {
            for (std::size_t b = a + 1; b < buf.size(); ++b) mask |= pair_bit(buf[a], buf[b]);
        }
        return mask;
    };

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> dist;  // (buffer idx, covered) -> swaps
    std::queue<std::pair<std::uint32_t, std::uint32_t>> frontier;
    for (std::uint32_t bi = 0; bi < buffers.size(); ++bi) {
        std::uint32_t mask = covered_in(buffers[bi]);
        if (mask == all_pairs) return 0;
        auto key = std::make_pair(bi, mask);
        if (!dist.count(key)) {
            dist[key] = 0;
            frontier.push(key);
        }
    }
    while (!frontier.empty()) {
        auto [bi, mask] = frontier.front();
        frontier.pop();
        std::uint64_t d = dist[{bi, mask}];
        const auto& buf = buffers[bi];
        for (std::uint32_t slot = 0; slot < c; ++slot) {
            for (std::uint32_t in = 0; in < p; ++in) {
                if (std::find(buf.begin(), buf.end(), in) != buf.end()) continue;
                std::vector<std::uint32_t> next = buf;
                next[slot] = in;
                std::sort(next.begin(), next.end());
                std::uint32_t next_mask = mask | covered_in(next);
                if (next_mask == all_pairs) return d + 1;
                std::uint32_t ni = static_cast<std::uint32_t>(std::lower_bound(buffers.begin(), buffers.end(), next) -
                                                              buffers.begin());
                auto key = std::make_pair(ni, next_mask);
                if (!dist.count(key)) {
                    dist[key] = d + 1;
                    frontier.push(key);
                }
            }
        }
    }
    throw std::logic_error("brute_force_min_swaps: goal unreachable");
}

}  // namespace

TEST_CASE("lower bound formula") {
    CHECK(lower_bound_swaps(4, 2) == 5);
    CHECK(lower_bound_swaps(4, 4) == 0);
    CHECK(lower_bound_swaps(2, 2) == 0);
    CHECK(lower_bound_swaps(6, 3) == 6);
    CHECK(lower_bound_swaps(128, 32) == 247);
    CHECK(lower_bound_swaps(1, 1) == 0);
    CHECK_THROWS_AS(lower_bound_swaps(4, 1), ConfigError);
    CHECK_THROWS_AS(lower_bound_swaps(4, 5), ConfigError);
}

TEST_CASE("elimination matches figure and formula examples") {
    CHECK(elimination_swap_formula(4, 2) == 5);
    CHECK(elimination_swap_formula(6, 3) == 7);

    auto plan = elimination_order(4, 2, 42);
    CHECK(plan.swap_count == 5);
    CHECK(plan.bucket_sequence.size() == 16);
    plan.validate();

    auto plan63 = elimination_order(6, 3, 7);
    CHECK(plan63.swap_count == 7);
    CHECK(lower_bound_swaps(6, 3) == 6);
    plan63.validate();
}

TEST_CASE("elimination p == c needs no swaps") {
    for (std::uint32_t p : {1u, 2u, 5u, 8u}) {
        auto plan = elimination_order(p, p, 3);
        CHECK(plan.swap_count == 0);
        CHECK(plan.bucket_sequence.size() == static_cast<std::size_t>(p) * p);
        plan.validate();
    }
}

TEST_CASE("elimination rejects c < 2 for p > 1") {
    CHECK_THROWS_AS(elimination_order(3, 1, 0), ConfigError);
    CHECK_THROWS_AS(elimination_order(3, 0, 0), ConfigError);
}

TEST_CASE("elimination swap count equals closed form for all p in 2..40") {
    for (std::uint32_t p = 2; p <= 40; ++p) {
        for (std::uint32_t c = 2; c <= p; ++c) {
            auto plan = elimination_order(p, c, mix_seed(99, p, c));
            CHECK_MESSAGE(plan.swap_count == elimination_swap_formula(p, c), "p=", p, " c=", c);
        }
    }
}

TEST_CASE("hilbert curve cells are Manhattan adjacent") {
    auto plan = hilbert_order(2, 2);
    REQUIRE(plan.bucket_sequence.size() == 4);
    for (std::size_t k = 0; k + 1 < plan.bucket_sequence.size(); ++k) {
        auto a = plan.bucket_sequence[k];
        auto b = plan.bucket_sequence[k + 1];
        int dist = std::abs(int(a.i) - int(b.i)) + std::abs(int(a.j) - int(b.j));
        CHECK(dist == 1);
    }

    auto plan8 = hilbert_order(8, 4);
    for (std::size_t k = 0; k + 1 < plan8.bucket_sequence.size(); ++k) {
        auto a = plan8.bucket_sequence[k];
        auto b = plan8.bucket_sequence[k + 1];
        int dist = std::abs(int(a.i) - int(b.i)) + std::abs(int(a.j) - int(b.j));
        CHECK(dist == 1);
    }
}

TEST_CASE("hilbert with belady has nine misses at p=4 c=2") {
    auto plan = hilbert_order(4, 2);
    CHECK(plan.swap_count == 9);
    plan.validate();
}

TEST_CASE("hilbert handles non power of two p") {
    for (std::uint32_t p : {3u, 5u, 6u, 7u, 12u}) {
        auto plan = hilbert_order(p, 2);
        CHECK(plan.bucket_sequence.size() == static_cast<std::size_t>(p) * p);
        plan.validate();
    }
}

TEST_CASE("hilbert symmetric emits mirrored buckets together") {
    auto plan = hilbert_symmetric_order(4, 2);
    CHECK(plan.bucket_sequence.size() == 16);
    plan.validate();
    for (std::size_t k = 0; k < plan.bucket_sequence.size(); ++k) {
        auto b = plan.bucket_sequence[k];
        if (b.i < b.j) {
            REQUIRE(k + 1 < plan.bucket_sequence.size());
            CHECK(plan.bucket_sequence[k + 1] == BucketId{b.j, b.i});
        }
    }
}

TEST_CASE("random order is a seeded permutation") {
    auto plan = random_order(5, 3, 17);
    auto plan2 = random_order(5, 3, 17);
    CHECK(plan.bucket_sequence == plan2.bucket_sequence);
    CHECK(plan.swap_count == plan2.swap_count);
    plan.validate();

    std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
    for (auto b : plan.bucket_sequence) cells.insert({b.i, b.j});
    CHECK(cells.size() == 25);
}

TEST_CASE("random ordering needs more swaps than elimination on average") {
    const std::uint32_t p = 32, c = 8;
    double elim = static_cast<double>(elimination_order(p, c, 1).swap_count);
    double total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        total += static_cast<double>(random_order(p, c, seed).swap_count);
    }
    CHECK(total / 20.0 > elim);
}

TEST_CASE("plan validity and bound hold for every generator") {
    for (std::uint32_t p : {2u, 3u, 4u, 7u, 8u, 16u, 32u}) {
        for (std::uint32_t c : {2u, 3u, std::max(2u, p / 2), p}) {
            if (c > p) continue;
            std::vector<OrderingPlan> plans;
            plans.push_back(elimination_order(p, c, 5));
            plans.push_back(hilbert_order(p, c));
            plans.push_back(hilbert_symmetric_order(p, c));
            plans.push_back(random_order(p, c, 5));
            for (const auto& plan : plans) {
                plan.validate();
                CHECK(plan.swap_count >= lower_bound_swaps(p, c));
            }
        }
    }
}

TEST_CASE("elimination is near optimal relative to the lower bound") {
    for (std::uint32_t p : {8u, 16u, 32u, 64u, 128u}) {
        std::uint32_t c = p / 4;
        double ratio = static_cast<double>(elimination_swap_formula(p, c)) /
                       static_cast<double>(lower_bound_swaps(p, c));
        CHECK(ratio <= 1.25);
    }
}

TEST_CASE("exhaustive search confirms elimination within one swap of optimum") {
    for (std::uint32_t p = 2; p <= 5; ++p) {
        for (std::uint32_t c = 2; c <= std::min(p, 3u); ++c) {
            std::uint64_t best = brute_force_min_swaps(p, c);
            std::uint64_t lb = lower_bound_swaps(p, c);
            std::uint64_t elim = elimination_order(p, c, 11).swap_count;
            CHECK(best >= lb);
            CHECK(elim >= best);
            CHECK_MESSAGE(elim <= best + 1, "p=", p, " c=", c, " best=", best, " elim=", elim);
        }
    }
}

TEST_CASE("simulated io counts reads and writes") {
    auto full = elimination_order(4, 4, 0);
    auto io = simulate_io(full, 1000);
    CHECK(io.reads == 4);
    CHECK(io.writes == 4);
    CHECK(io.total_bytes == 8000);

    auto elim = elimination_order(4, 2, 0);
    CHECK(simulate_io(elim, 1).reads == 7);  // 2 fills + 5 swaps

    // Freebase86m-shaped: 68.8 GB over 32 partitions, buffer of 8.
    const std::uint64_t part_bytes = 68'800'000'000ULL / 32;
    auto e = simulate_io(elimination_order(32, 8, 3), part_bytes);
    auto h = simulate_io(hilbert_order(32, 8), part_bytes);
    auto r = simulate_io(random_order(32, 8, 3), part_bytes);
    CHECK(e.total_bytes < h.total_bytes);
    CHECK(e.total_bytes < r.total_bytes);
}

TEST_CASE("swap events and admission schedule are consistent views") {
    auto plan = elimination_order(6, 3, 21);
    CHECK(plan.admission_schedule.size() == plan.c + plan.swap_count);
    std::size_t k = 0;
    for (const auto& ev : plan.swap_events) {
        CHECK(plan.admission_schedule[plan.c + k] == ev.admitted);
        ++k;
    }
}

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ember/common.h"

namespace ember {

enum class OrderingKind { Elimination, Hilbert, HilbertSymmetric, Random };

std::string to_string(OrderingKind kind);
OrderingKind ordering_kind_from_string(const std::string& name);

struct BucketId {
    std::uint32_t i;
    std::uint32_t j;

    bool operator==(const BucketId&) const = default;
    auto operator<=>(const BucketId&) const = default;
};

struct SwapEvent {
    std::uint32_t step;       // bucket index in the sequence at which the swap happened
    PartitionId evicted;
    PartitionId admitted;
};

// A full traversal schedule for one epoch: the p^2 edge buckets in processing
// order plus the buffer-state trace a capacity-c buffer incurs replaying it
// under furthest-next-use (Belady) eviction. swap_count counts admissions
// after the initial fill of c partitions; the fill itself is not a swap.
struct OrderingPlan {
    OrderingKind kind = OrderingKind::Elimination;
    std::uint32_t p = 0;
    std::uint32_t c = 0;
    std::uint64_t seed = 0;

    std::vector<BucketId> bucket_sequence;               // permutation of [0,p)^2
    std::vector<std::vector<PartitionId>> buffer_states; // states[0] = after fill; one state per swap after
    std::vector<std::uint32_t> bucket_state;             // per bucket step: index into buffer_states
    std::vector<SwapEvent> swap_events;
    std::vector<PartitionId> admission_schedule;         // fill loads then swap admissions, in order
    std::uint64_t swap_count = 0;

    // For each partition, the sorted list of steps at which a bucket uses it.
    std::vector<std::vector<std::uint32_t>> partition_use_steps;

    static constexpr std::uint64_t kNeverUsed = ~0ULL;

    // First step > `step` at which `part` is used, or kNeverUsed.
    std::uint64_t next_use_after(PartitionId part, std::uint64_t step) const;

    std::uint64_t num_buckets() const { return static_cast<std::uint64_t>(p) * p; }

    // Checks the structural invariants: bucket_sequence is a permutation of
    // [0,p)^2, both endpoints of each bucket are resident in its traced state,
    // consecutive states differ by exactly one swap, and no state exceeds c.
    void validate() const;
};

OrderingPlan elimination_order(std::uint32_t p, std::uint32_t c, std::uint64_t seed);
OrderingPlan hilbert_order(std::uint32_t p, std::uint32_t c);
OrderingPlan hilbert_symmetric_order(std::uint32_t p, std::uint32_t c);
OrderingPlan random_order(std::uint32_t p, std::uint32_t c, std::uint64_t seed);

OrderingPlan make_plan(OrderingKind kind, std::uint32_t p, std::uint32_t c, std::uint64_t seed);

// ceil((p(p-1)/2 - c(c-1)/2) / (c-1)): the floor on swaps for any traversal.
std::uint64_t lower_bound_swaps(std::uint32_t p, std::uint32_t c);

// (p-c) + (x+1)[(p-c) - x(c-1)/2] with x = floor((p-c)/(c-1)): the swap count
// the elimination construction incurs.
std::uint64_t elimination_swap_formula(std::uint32_t p, std::uint32_t c);

struct IOReport {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t total_bytes = 0;
};

// reads = c fills + swap admissions; writes = one per eviction (training marks
// every resident partition dirty) plus the epoch-end flush of c residents.
IOReport simulate_io(const OrderingPlan& plan, std::uint64_t partition_bytes);

// Maps a Hilbert curve index to (x, y) on an n x n grid (n a power of two),
// origin at the top-left.
std::pair<std::uint32_t, std::uint32_t> hilbert_d2xy(std::uint32_t n, std::uint64_t d);

}  // namespace ember

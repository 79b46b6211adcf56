// SPDX-License-Identifier: Apache-2.0

#include "ember/ordering.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <unordered_set>

namespace ember {

std::string to_string(OrderingKind kind) {
    switch (kind) {
        case OrderingKind::Elimination: return "elimination";
        case OrderingKind::Hilbert: return "hilbert";
        case OrderingKind::HilbertSymmetric: return "hilbert_symmetric";
        case OrderingKind::Random: return "random";
    }
    return "unknown";
}

OrderingKind ordering_kind_from_string(const std::string& name) {
    if (name == "elimination") return OrderingKind::Elimination;
    if (name == "hilbert") return OrderingKind::Hilbert;
    if (name == "hilbert_symmetric" || name == "hilbertsymmetric") return OrderingKind::HilbertSymmetric;
    if (name == "random") return OrderingKind::Random;
    throw ConfigError("unknown ordering kind: " + name);
}

std::uint64_t OrderingPlan::next_use_after(PartitionId part, std::uint64_t step) const {
    const auto& uses = partition_use_steps.at(part);
    auto it = std::upper_bound(uses.begin(), uses.end(), step);
    if (it == uses.end()) return kNeverUsed;
    return *it;
}

void OrderingPlan::validate() const {
    const std::uint64_t n = num_buckets();
    if (bucket_sequence.size() != n) throw EmberError("plan: bucket count != p^2");
    if (bucket_state.size() != n) throw EmberError("plan: missing per-bucket state index");
    std::vector<char> seen(n, 0);
    for (const auto& b : bucket_sequence) {
        if (b.i >= p || b.j >= p) throw EmberError("plan: bucket id out of range");
        std::uint64_t flat = static_cast<std::uint64_t>(b.i) * p + b.j;
        if (seen[flat]) throw EmberError("plan: duplicate bucket");
        seen[flat] = 1;
    }
    if (buffer_states.empty()) throw EmberError("plan: no buffer states");
    if (buffer_states.size() != swap_events.size() + 1) throw EmberError("plan: state count != swaps + 1");
    for (const auto& state : buffer_states) {
        if (state.size() > c) throw EmberError("plan: buffer state exceeds capacity");
        if (!std::is_sorted(state.begin(), state.end())) throw EmberError("plan: state not sorted");
    }
    for (std::size_t k = 0; k + 1 < buffer_states.size(); ++k) {
        const auto& a = buffer_states[k];
        const auto& b = buffer_states[k + 1];
        std::vector<PartitionId> gone, added;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(gone));
        std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(added));
        if (gone.size() != 1 || added.size() != 1) throw EmberError("plan: consecutive states differ by != 1 swap");
        if (gone[0] != swap_events[k].evicted || added[0] != swap_events[k].admitted) {
            throw EmberError("plan: swap event does not match state transition");
        }
    }
    std::uint32_t prev_state = 0;
    for (std::uint64_t t = 0; t < n; ++t) {
        std::uint32_t s = bucket_state[t];
        if (s >= buffer_states.size()) throw EmberError("plan: state index out of range");
        if (s < prev_state) throw EmberError("plan: state index regressed");
        prev_state = s;
        const auto& state = buffer_states[s];
        if (!std::binary_search(state.begin(), state.end(), bucket_sequence[t].i) ||
            !std::binary_search(state.begin(), state.end(), bucket_sequence[t].j)) {
            throw EmberError("plan: bucket processed without both partitions resident");
        }
    }
    if (swap_count != swap_events.size()) throw EmberError("plan: swap_count mismatch");
}

namespace {

void check_pc(std::uint32_t p, std::uint32_t c) {
    if (p == 0) throw ConfigError("ordering: p must be >= 1");
    if (c > p) throw ConfigError("ordering: c must be <= p");
    if (c < 2 && p > 1) throw ConfigError("ordering: c must be >= 2 when p > 1");
    if (c == 0) throw ConfigError("ordering: c must be >= 1");
}

// Replays a bucket sequence through a capacity-c buffer with furthest-next-use
// eviction (ties to the lower partition id) and records the state trace. The
// partition buffer makes identical decisions at run time, so the swap counts
// here are the counts the live system incurs.
void simulate_belady(OrderingPlan& plan) {
    const std::uint32_t p = plan.p;
    const std::uint32_t c = plan.c;
    const std::uint64_t n = plan.num_buckets();

    plan.partition_use_steps.assign(p, {});
    for (std::uint64_t t = 0; t < n; ++t) {
        const BucketId& b = plan.bucket_sequence[t];
        plan.partition_use_steps[b.i].push_back(static_cast<std::uint32_t>(t));
        if (b.j != b.i) plan.partition_use_steps[b.j].push_back(static_cast<std::uint32_t>(t));
    }

    plan.buffer_states.clear();
    plan.swap_events.clear();
    plan.admission_schedule.clear();
    plan.bucket_state.assign(n, 0);

    std::set<PartitionId> resident;
    std::uint64_t fills = 0;

    auto record_state = [&]() {
        std::vector<PartitionId> state(resident.begin(), resident.end());
        plan.buffer_states.push_back(std::move(state));
    };

    for (std::uint64_t t = 0; t < n; ++t) {
        const BucketId& b = plan.bucket_sequence[t];
        for (PartitionId need : {b.i, b.j}) {
            if (resident.count(need)) continue;
            if (fills < c) {
                resident.insert(need);
                plan.admission_schedule.push_back(need);
                ++fills;
                if (fills == c) record_state();  // state 0: the completed initial buffer
                continue;
            }
            // Evict: among residents not required by this bucket, the one whose
            // next use lies furthest ahead; never-used-again wins outright and
            // ties go to the lower partition id (ascending set order).
            PartitionId victim = 0;
            std::uint64_t victim_next = 0;
            bool have_victim = false;
            for (PartitionId r : resident) {
                if (r == b.i || r == b.j) continue;
                std::uint64_t nu = plan.next_use_after(r, t);
                if (!have_victim || nu > victim_next) {
                    victim = r;
                    victim_next = nu;
                    have_victim = true;
                }
            }
            if (!have_victim) throw EmberError("belady: no evictable partition (c too small for bucket)");
            resident.erase(victim);
            resident.insert(need);
            plan.swap_events.push_back({static_cast<std::uint32_t>(t), victim, need});
            plan.admission_schedule.push_back(need);
            record_state();
        }
        // Buckets touched while the buffer is still filling belong to state 0:
        // the completed initial buffer contains every partition admitted so far.
        plan.bucket_state[t] =
            plan.buffer_states.empty() ? 0 : static_cast<std::uint32_t>(plan.buffer_states.size() - 1);
    }
    if (plan.buffer_states.empty()) record_state();
    plan.swap_count = plan.swap_events.size();
}

}  // namespace

std::uint64_t lower_bound_swaps(std::uint32_t p, std::uint32_t c) {
    if (c == 0 || c > p) throw ConfigError("lower_bound_swaps: requires 1 <= c <= p");
    if (p == c) return 0;
    if (c == 1) throw ConfigError("lower_bound_swaps: c = 1 cannot cover pairs for p > 1");
    std::uint64_t pairs_total = static_cast<std::uint64_t>(p) * (p - 1) / 2;
    std::uint64_t pairs_first = static_cast<std::uint64_t>(c) * (c - 1) / 2;
    std::uint64_t remaining = pairs_total - pairs_first;
    return (remaining + (c - 1) - 1) / (c - 1);
}

std::uint64_t elimination_swap_formula(std::uint32_t p, std::uint32_t c) {
    if (c == 0 || c > p) throw ConfigError("elimination_swap_formula: requires 1 <= c <= p");
    if (p == c) return 0;
    if (c == 1) throw ConfigError("elimination_swap_formula: c = 1 invalid for p > 1");
    std::uint64_t pc = p - c;
    std::uint64_t x = pc / (c - 1);
    // x(c-1)/2 is integral whenever it matters; evaluate in doubled units to
    // avoid rounding when x(c-1) is odd.
    std::uint64_t doubled = 2 * pc + (x + 1) * (2 * pc - x * (c - 1));
    return doubled / 2;
}

OrderingPlan elimination_order(std::uint32_t p, std::uint32_t c, std::uint64_t seed) {
    check_pc(p, c);
    OrderingPlan plan;
    plan.kind = OrderingKind::Elimination;
    plan.p = p;
    plan.c = c;
    plan.seed = seed;
    plan.bucket_sequence.reserve(static_cast<std::size_t>(p) * p);

    Rng rng(mix_seed(seed, 0x0e11u));

    std::vector<char> processed(static_cast<std::size_t>(p) * p, 0);
    auto emit_new_pairs = [&](const std::vector<PartitionId>& residents) {
        // Newly available buckets within one buffer state go out in
        // lexicographic (i, j) order.
        std::vector<PartitionId> sorted = residents;
        std::sort(sorted.begin(), sorted.end());
        for (PartitionId i : sorted) {
            for (PartitionId j : sorted) {
                std::uint64_t flat = static_cast<std::uint64_t>(i) * p + j;
                if (!processed[flat]) {
                    processed[flat] = 1;
                    plan.bucket_sequence.push_back({i, j});
                }
            }
        }
    };

    if (p == c) {
        std::vector<PartitionId> all(p);
        std::iota(all.begin(), all.end(), 0);
        emit_new_pairs(all);
    } else {
        std::vector<PartitionId> unretired(p);
        std::iota(unretired.begin(), unretired.end(), 0);

        // Round 0 buffer: c partitions sampled at random ("we break ties randomly").
        std::vector<PartitionId> buffer = rng.sample_without_replacement(unretired, c);

        while (true) {
            emit_new_pairs(buffer);

            if (unretired.size() <= c) break;  // all remaining pairs already co-resident

            // Fix c-1 residents; the remaining slot streams every other
            // unretired partition through, c-1 new pairs per swap.
            std::vector<PartitionId> fixed = rng.sample_without_replacement(buffer, c - 1);
            std::vector<char> is_fixed(p, 0);
            for (PartitionId f : fixed) is_fixed[f] = 1;
            PartitionId slot = 0;
            for (PartitionId b : buffer) {
                if (!is_fixed[b]) slot = b;
            }

            std::vector<char> in_buffer(p, 0);
            for (PartitionId b : buffer) in_buffer[b] = 1;
            std::vector<PartitionId> to_stream;
            for (PartitionId u : unretired) {
                if (!in_buffer[u]) to_stream.push_back(u);
            }
            rng.shuffle(to_stream);

            for (PartitionId s : to_stream) {
                slot = s;
                std::vector<PartitionId> residents = fixed;
                residents.push_back(s);
                emit_new_pairs(residents);
            }

            // Retire the fixed partitions; the last streamed partition stays
            // resident and seeds the next round's buffer.
            std::vector<PartitionId> next_unretired;
            for (PartitionId u : unretired) {
                if (!is_fixed[u]) next_unretired.push_back(u);
            }
            unretired = std::move(next_unretired);
            PartitionId keep = slot;

            if (unretired.size() >= c) {
                std::vector<PartitionId> candidates;
                for (PartitionId u : unretired) {
                    if (u != keep) candidates.push_back(u);
                }
                std::vector<PartitionId> fresh = rng.sample_without_replacement(candidates, c - 1);
                buffer.assign(1, keep);
                // First co-residency processing: emit after each admission.
                for (PartitionId f : fresh) {
                    buffer.push_back(f);
                    emit_new_pairs(buffer);
                }
                // The loop head re-emits (no-ops) and continues the round.
            } else {
                // Terminal: the leftover partitions all fit alongside each other.
                buffer.assign(1, keep);
                std::vector<PartitionId> rest;
                for (PartitionId u : unretired) {
                    if (u != keep) rest.push_back(u);
                }
                rng.shuffle(rest);
                for (PartitionId u : rest) {
                    buffer.push_back(u);
                    emit_new_pairs(buffer);
                }
                break;
            }
        }
    }

    if (plan.bucket_sequence.size() != plan.num_buckets()) {
        throw EmberError("elimination_order: construction missed buckets");
    }
    simulate_belady(plan);
    return plan;
}

std::pair<std::uint32_t, std::uint32_t> hilbert_d2xy(std::uint32_t n, std::uint64_t d) {
    std::uint32_t x = 0, y = 0;
    std::uint64_t t = d;
    for (std::uint32_t s = 1; s < n; s *= 2) {
        std::uint32_t rx = 1 & static_cast<std::uint32_t>(t / 2);
        std::uint32_t ry = 1 & static_cast<std::uint32_t>(t ^ rx);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
        x += s * rx;
        y += s * ry;
        t /= 4;
    }
    return {x, y};
}

namespace {

std::vector<BucketId> hilbert_cells(std::uint32_t p) {
    std::uint32_t n = 1;
    while (n < p) n *= 2;
    std::vector<BucketId> cells;
    cells.reserve(static_cast<std::size_t>(p) * p);
    for (std::uint64_t d = 0; d < static_cast<std::uint64_t>(n) * n; ++d) {
        auto [x, y] = hilbert_d2xy(n, d);
        if (x < p && y < p) cells.push_back({x, y});
    }
    return cells;
}

}  // namespace

OrderingPlan hilbert_order(std::uint32_t p, std::uint32_t c) {
    check_pc(p, c);
    OrderingPlan plan;
    plan.kind = OrderingKind::Hilbert;
    plan.p = p;
    plan.c = c;
    plan.bucket_sequence = hilbert_cells(p);
    simulate_belady(plan);
    return plan;
}

OrderingPlan hilbert_symmetric_order(std::uint32_t p, std::uint32_t c) {
    check_pc(p, c);
    OrderingPlan plan;
    plan.kind = OrderingKind::HilbertSymmetric;
    plan.p = p;
    plan.c = c;
    std::vector<char> emitted(static_cast<std::size_t>(p) * p, 0);
    for (const BucketId& cell : hilbert_cells(p)) {
        std::uint32_t lo = std::min(cell.i, cell.j);
        std::uint32_t hi = std::max(cell.i, cell.j);
        std::uint64_t flat = static_cast<std::uint64_t>(lo) * p + hi;
        if (emitted[flat]) continue;
        emitted[flat] = 1;
        plan.bucket_sequence.push_back({lo, hi});
        if (lo != hi) plan.bucket_sequence.push_back({hi, lo});
    }
    simulate_belady(plan);
    return plan;
}

OrderingPlan random_order(std::uint32_t p, std::uint32_t c, std::uint64_t seed) {
    check_pc(p, c);
    OrderingPlan plan;
    plan.kind = OrderingKind::Random;
    plan.p = p;
    plan.c = c;
    plan.seed = seed;
    plan.bucket_sequence.reserve(static_cast<std::size_t>(p) * p);
    for (std::uint32_t i = 0; i < p; ++i) {
        for (std::uint32_t j = 0; j < p; ++j) plan.bucket_sequence.push_back({i, j});
    }
    Rng rng(mix_seed(seed, 0x7a2du));
    rng.shuffle(plan.bucket_sequence);
    simulate_belady(plan);
    return plan;
}

OrderingPlan make_plan(OrderingKind kind, std::uint32_t p, std::uint32_t c, std::uint64_t seed) {
    switch (kind) {
        case OrderingKind::Elimination: return elimination_order(p, c, seed);
        case OrderingKind::Hilbert: return hilbert_order(p, c);
        case OrderingKind::HilbertSymmetric: return hilbert_symmetric_order(p, c);
        case OrderingKind::Random: return random_order(p, c, seed);
    }
    throw ConfigError("make_plan: unknown ordering kind");
}

IOReport simulate_io(const OrderingPlan& plan, std::uint64_t partition_bytes) {
    IOReport report;
    std::uint64_t fills = std::min<std::uint64_t>(plan.c, plan.p);
    report.reads = fills + plan.swap_count;
    report.writes = plan.swap_count + fills;  // evictions are dirty during training; residents flush at epoch end
    report.total_bytes = (report.reads + report.writes) * partition_bytes;
    return report;
}

}  // namespace ember

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ember {

using NodeId = std::uint32_t;
using RelationId = std::uint32_t;
using PartitionId = std::uint32_t;

struct EdgeTriple {
    NodeId src;
    RelationId rel;
    NodeId dst;

    bool operator==(const EdgeTriple&) const = default;
};

struct EdgeTripleHash {
    std::size_t operator()(const EdgeTriple& e) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t v : {std::uint64_t(e.src), std::uint64_t(e.rel), std::uint64_t(e.dst)}) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

class EmberError : public std::runtime_error {
   public:
    explicit EmberError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public EmberError {
   public:
    explicit IoError(const std::string& msg) : EmberError(msg) {}
};

class ConfigError : public EmberError {
   public:
    explicit ConfigError(const std::string& msg) : EmberError(msg) {}
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and one or more salts.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) { return splitmix64(base ^ splitmix64(salt)); }
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) { return mix_seed(mix_seed(base, a), b); }

// Deterministic RNG: the mt19937_64 stream is standardized, and all
// distributions here are hand-rolled so outputs are identical across
// platforms and standard libraries.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x2545f4914f6cdd1dULL)) {}

    std::uint64_t next() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Unbiased uniform draw from [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw EmberError("uniform_below: n must be positive");
        while (true) {
            std::uint64_t x = next();
            unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo < n) {
                std::uint64_t threshold = (0ULL - n) % n;
                if (lo < threshold) continue;
            }
            return static_cast<std::uint64_t>(m >> 64);
        }
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    float uniform(float lo, float hi) { return lo + static_cast<float>(uniform01()) * (hi - lo); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct elements sampled from v without replacement (partial Fisher-Yates);
    // v is reordered so its first k entries are the sample.
    template <typename T>
    std::vector<T> sample_without_replacement(std::vector<T> v, std::size_t k) {
        if (k > v.size()) throw EmberError("sample_without_replacement: k exceeds population");
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(uniform_below(v.size() - i));
            std::swap(v[i], v[j]);
        }
        v.resize(k);
        return v;
    }

   private:
    std::uint64_t state_;
};

}  // namespace ember

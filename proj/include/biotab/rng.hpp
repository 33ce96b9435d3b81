#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace biotab {

/// Seeded random source with platform-independent draws.
///
/// std::uniform_int_distribution is implementation-defined, so bounded draws
/// are done here by rejection sampling on the raw mt19937_64 stream. That keeps
/// generated files byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct values from [0, n), ascending. Requires k <= n.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

private:
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ULL);

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and a string key.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);

}  // namespace biotab

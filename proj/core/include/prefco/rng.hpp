#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace prefco {

// mt19937_64's output sequence is fixed by the standard; the helpers below avoid
// the implementation-defined std:: distributions so results match across toolchains.
using Rng = std::mt19937_64;

// Named sub-streams for seed splitting.
enum class SeedStream : std::uint64_t {
    kInstance = 1,
    kTraining = 2,
    kLocalSearch = 3,
    kEvaluation = 4,
    kAlphaTuning = 5,
};

// Counter-based splitting: the child seed depends only on (root, stream, index),
// never on how many other children were drawn before it.
std::uint64_t split_seed(std::uint64_t root, SeedStream stream, std::uint64_t index);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, bound). bound must be positive.
std::size_t uniform_index(Rng& rng, std::size_t bound);

template <typename T>
void shuffle(T* first, std::size_t count, Rng& rng) {
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = uniform_index(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace prefco

#include "prefco/rng.hpp"

namespace prefco {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t root, SeedStream stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(root);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ index);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(Rng& rng, std::size_t bound) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t b = bound;
    const std::uint64_t limit = Rng::max() - (Rng::max() % b + 1) % b;
    std::uint64_t draw = rng();
    while (draw > limit) draw = rng();
    return static_cast<std::size_t>(draw % b);
}

}  // namespace prefco

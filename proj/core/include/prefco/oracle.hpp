#pragma once

#include <cstddef>

#include "prefco/instance.hpp"

namespace prefco {

enum class OracleMethod { kExhaustive, kHeldKarp };

struct OracleResult {
    Permutation best_perm;
    double best_length = 0.0;
    OracleMethod method = OracleMethod::kExhaustive;
};

inline constexpr std::size_t kMaxExhaustiveNodes = 10;
inline constexpr std::size_t kDefaultHeldKarpNodes = 18;

/// Rotates perm to start at node 0 and orients it so perm[1] < perm[n-1].
Permutation canonical_tour(std::span<const int> perm);

/// Enumerates the (n-1)!/2 distinct closed tours. Among equal-length optima the
/// lexicographically smallest canonical permutation wins.
OracleResult solve_exhaustive(const Instance& inst);

/// Bitmask dynamic program over subsets; O(2^n n^2) time, O(2^n n) memory.
/// best_length is recomputed from the reconstructed tour with tour_length so it
/// is comparable bit-for-bit with solve_exhaustive.
OracleResult solve_held_karp(const Instance& inst, std::size_t max_nodes = kDefaultHeldKarpNodes);

/// (tour length - optimum) / optimum.
double optimality_gap(const Instance& inst, const Tour& tour, const OracleResult& oracle);

}  // namespace prefco

#pragma once

#include <limits>

#include "prefco/instance.hpp"
#include "prefco/policy.hpp"
#include "prefco/rng.hpp"

namespace prefco {

enum class LsStrategy { kFirstImprovement, kBestImprovement };

struct LsConfig {
    // Cap on accepted improving moves (not full passes).
    int max_iters = 20;
    LsStrategy strategy = LsStrategy::kFirstImprovement;
};

inline constexpr int kUnlimitedMoves = std::numeric_limits<int>::max();

/// A 2-opt move is only taken when its exact delta is below -kImprovementThreshold.
inline constexpr double kImprovementThreshold = 1e-12;

/// 2-opt segment reversals; position 0 of the permutation never moves. First
/// improvement scans the first edge in a seeded random order and restarts the scan
/// after every accepted move. The result never has a lower reward than `tour`.
Tour two_opt(const Instance& inst, const Tour& tour, const LsConfig& cfg, Rng& rng);

/// Appends LS(tau) for every tour in `batch`, scored under `policy`, giving 2N entries.
SampleBatch make_finetune_pairs(const HeatmapPolicy& policy, const Instance& inst, const SampleBatch& batch,
                                const LsConfig& cfg, Rng& rng);

}  // namespace prefco

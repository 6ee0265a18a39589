#include "prefco/local_search.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "prefco/error.hpp"

namespace prefco {
namespace {

struct Move {
    std::size_t i = 0;
    std::size_t j = 0;
    double delta = 0.0;
};

// Replaces edges (perm[i], perm[i+1]) and (perm[j], perm[j+1]) by
// (perm[i], perm[j]) and (perm[i+1], perm[j+1]).
double move_delta(const Instance& inst, const Permutation& perm, std::size_t i, std::size_t j) {
    const std::size_t n = perm.size();
    const auto a = static_cast<std::size_t>(perm[i]);
    const auto b = static_cast<std::size_t>(perm[i + 1]);
    const auto c = static_cast<std::size_t>(perm[j]);
    const auto d = static_cast<std::size_t>(perm[(j + 1) % n]);
    return inst.distance(a, c) + inst.distance(b, d) - inst.distance(a, b) - inst.distance(c, d);
}

bool valid_pair(std::size_t i, std::size_t j, std::size_t n) { return j >= i + 2 && !(i == 0 && j == n - 1); }

bool find_first(const Instance& inst, const Permutation& perm, std::vector<std::size_t>& order, Rng& rng,
                Move& move) {
    const std::size_t n = perm.size();
    shuffle(order.data(), order.size(), rng);
    for (std::size_t i : order) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (!valid_pair(i, j, n)) continue;
            const double delta = move_delta(inst, perm, i, j);
            if (delta < -kImprovementThreshold) {
                move = {i, j, delta};
                return true;
            }
        }
    }
    return false;
}

bool find_best(const Instance& inst, const Permutation& perm, Move& move) {
    const std::size_t n = perm.size();
    bool found = false;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (!valid_pair(i, j, n)) continue;
            const double delta = move_delta(inst, perm, i, j);
            if (delta < -kImprovementThreshold && (!found || delta < move.delta)) {
                move = {i, j, delta};
                found = true;
            }
        }
    }
    return found;
}

}  // namespace

Tour two_opt(const Instance& inst, const Tour& tour, const LsConfig& cfg, Rng& rng) {
    if (cfg.max_iters < 1) fail(ErrorCode::kInvalidArgument, "ls max_iters must be >= 1");
    validate_permutation(tour.perm, inst.size());
    const std::size_t n = inst.size();
    const double start_length = tour_length(inst, tour.perm);

    Permutation perm = tour.perm;
    std::vector<std::size_t> order(n - 2);
    std::iota(order.begin(), order.end(), std::size_t{0});
    [[maybe_unused]] double running = start_length;

    for (int moves = 0; moves < cfg.max_iters; ++moves) {
        Move move;
        const bool found = cfg.strategy == LsStrategy::kFirstImprovement ? find_first(inst, perm, order, rng, move)
                                                                         : find_best(inst, perm, move);
        if (!found) break;
        std::reverse(perm.begin() + static_cast<std::ptrdiff_t>(move.i + 1),
                     perm.begin() + static_cast<std::ptrdiff_t>(move.j + 1));
        running += move.delta;
        assert(std::abs(running - tour_length(inst, perm)) < 1e-9);
    }

    Tour out = make_tour(inst, std::move(perm));
    // Summation order can differ from the input's by an ulp; never report a worse tour.
    if (out.length > start_length) return make_tour(inst, tour.perm);
    return out;
}

SampleBatch make_finetune_pairs(const HeatmapPolicy& policy, const Instance& inst, const SampleBatch& batch,
                                const LsConfig& cfg, Rng& rng) {
    SampleBatch out = batch;
    const std::size_t n = batch.size();
    for (std::size_t i = 0; i < n; ++i) {
        Tour refined = two_opt(inst, batch.tours[i], cfg, rng);
        TourScore score = score_tour(policy, inst, refined.perm);
        out.append(std::move(refined), score.log_prob, std::move(score.step_entropies));
    }
    return out;
}

}  // namespace prefco

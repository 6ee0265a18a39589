#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefco/config.hpp"
#include "prefco/instance.hpp"
#include "prefco/policy.hpp"
#include "prefco/preference.hpp"

namespace prefco {

struct StepMetrics {
    int step = 0;
    bool finetune = false;
    double mean_reward = 0.0;  // over the tours sampled from the policy this step
    double best_reward = 0.0;  // best tour seen so far, LS tours included
    std::optional<double> gap;  // of best_reward, when the optimum is known
    double trajectory_entropy = 0.0;
    std::optional<double> consistency;
    std::vector<double> advantages;
    double loss = 0.0;
};

struct TrainResult {
    HeatmapPolicy policy;
    std::vector<StepMetrics> metrics;
    Tour best_tour;
};

/// Labels/advantages for one batch under cfg: rewards are shaped by
/// reward_scale * r + reward_shift first, then PO or REINFORCE is applied.
LossResult batch_objective(const SampleBatch& batch, const TrainConfig& cfg);

/// steps standard updates followed by finetune_steps LS-augmented updates on one
/// instance. Deterministic in (inst, cfg, warm_start).
TrainResult train_instance(const Instance& inst, const TrainConfig& cfg,
                           std::optional<double> optimal_length = std::nullopt,
                           const HeatmapPolicy* warm_start = nullptr);

/// cfg with the seed of the index-th instance of a multi-instance run:
/// split_seed(cfg.seed, kTraining, index).
TrainConfig config_for_instance(const TrainConfig& cfg, std::size_t index);

/// Independent per-instance runs; instance i trains with seed
/// split_seed(cfg.seed, kTraining, i). Output does not depend on `jobs`.
std::vector<TrainResult> train_many(std::span<const Instance> instances, const TrainConfig& cfg,
                                    std::span<const std::optional<double>> optimal_lengths = {},
                                    std::span<const HeatmapPolicy> warm_starts = {}, int jobs = 1);

struct ConsistencyResult {
    double value = 0.0;             // fraction of reward-ordered pairs the policy ranks the same way
    std::size_t ordered_pairs = 0;  // pairs with r_j > r_k
    std::size_t logprob_ties = 0;   // of those, pairs with equal log-probabilities
};

/// Re-scores every tour of `batch` under `policy`. Empty when no pair of tours is
/// strictly ordered by reward.
std::optional<ConsistencyResult> consistency_metric(const HeatmapPolicy& policy, const Instance& inst,
                                                    const SampleBatch& batch);
std::optional<ConsistencyResult> consistency_from_log_probs(std::span<const double> rewards,
                                                            std::span<const double> log_probs);

struct AdvantagePoint {
    double length = 0.0;
    double advantage = 0.0;
};

/// Per-tour advantages under cfg's algorithm, sorted by ascending tour length.
std::vector<AdvantagePoint> advantage_report(const SampleBatch& batch, const TrainConfig& cfg);

/// First step whose best-so-far gap is <= threshold.
std::optional<int> iterations_to_gap(std::span<const StepMetrics> metrics, double threshold);

struct AlphaSelection {
    double alpha = 0.0;
    std::vector<double> final_scores;  // mean final gap (or best length) per grid entry
    std::vector<double> area_scores;   // mean over steps, the tie-breaker
};

/// Mean final scores closer than this are treated as equal by select_alpha.
inline constexpr double kAlphaTieTolerance = 1e-9;

/// Grid search: trains every instance once per candidate alpha and keeps the one
/// with the lowest mean final gap, ties (within kAlphaTieTolerance) broken by the
/// mean gap over all steps.
AlphaSelection select_alpha(std::span<const Instance> instances, const TrainConfig& cfg,
                            std::span<const std::optional<double>> optimal_lengths, std::span<const double> grid,
                            int jobs = 1);

/// CSV with header step,mean_reward,best_reward,gap,entropy,consistency,loss.
/// Absent values are empty fields.
std::string metrics_to_csv(std::span<const StepMetrics> metrics);

}  // namespace prefco

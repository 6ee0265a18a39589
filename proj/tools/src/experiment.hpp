#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "prefco/config.hpp"
#include "prefco/instance.hpp"
#include "prefco/trainer.hpp"

namespace prefco::cli {

inline constexpr double kDefaultGapThreshold = 0.01;
// Share of the standard phase treated as "early" for the entropy aggregate.
inline constexpr double kEarlyFraction = 0.2;

/// Reference tour length for gaps: Held-Karp when n is small enough, otherwise a
/// 2-opt-converged greedy tour, which is only an upper bound on the optimum.
struct Reference {
    double length = 0.0;
    bool exact = false;
};

/// Exact optima (Held-Karp) for instances with n <= kDefaultHeldKarpNodes; empty otherwise.
std::vector<std::optional<double>> exact_optima(std::span<const Instance> instances, int jobs);

struct InstanceSummary {
    std::string id;
    std::optional<double> optimal_length;
    double best_length = 0.0;
    std::optional<double> final_gap;
    std::optional<int> iters_to_gap;
    double early_entropy = 0.0;
    std::optional<double> final_consistency;
    double greedy_length = 0.0;
    std::optional<double> greedy_gap;
    // Set for fine-tune runs: the same measurements on the starting checkpoint.
    std::optional<double> start_greedy_gap;
    std::optional<double> start_consistency;
};

/// Per-instance aggregates of one training run. `index` selects the evaluation
/// seed used to draw the fresh batch for the consistency measurement.
InstanceSummary summarize(const Instance& inst, const TrainResult& run, std::optional<double> optimum,
                          const TrainConfig& cfg, std::size_t index, double gap_threshold);

nlohmann::json to_json(const InstanceSummary& s);
InstanceSummary summary_from_json(const nlohmann::json& j);

struct RunAggregate {
    std::size_t instances = 0;
    std::size_t reached = 0;          // instances whose best gap reached the threshold
    std::optional<double> median_iters;  // unreached instances count as total steps + 1
    std::optional<double> mean_final_gap;
    double mean_early_entropy = 0.0;
    std::optional<double> mean_final_consistency;
    std::optional<double> mean_greedy_gap;
};

RunAggregate aggregate(std::span<const InstanceSummary> summaries, int total_steps);
nlohmann::json to_json(const RunAggregate& a);

double median(std::vector<double> values);

/// Iterations-to-gap with unreached instances censored at total_steps + 1.
double censored_iters(const InstanceSummary& s, int total_steps);

}  // namespace prefco::cli

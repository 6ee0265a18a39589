#include "experiment.hpp"

#include <algorithm>
#include <cmath>

#include "prefco/error.hpp"
#include "prefco/oracle.hpp"
#include "prefco/parallel.hpp"

namespace prefco::cli {

std::vector<std::optional<double>> exact_optima(std::span<const Instance> instances, int jobs) {
    std::vector<std::optional<double>> out(instances.size());
    parallel_for(instances.size(), jobs, [&](std::size_t i) {
        if (instances[i].size() <= kDefaultHeldKarpNodes) out[i] = solve_held_karp(instances[i]).best_length;
    });
    return out;
}

InstanceSummary summarize(const Instance& inst, const TrainResult& run, std::optional<double> optimum,
                          const TrainConfig& cfg, std::size_t index, double gap_threshold) {
    InstanceSummary s;
    s.id = inst.id();
    s.optimal_length = optimum;
    s.best_length = run.best_tour.length;
    if (!run.metrics.empty()) s.final_gap = run.metrics.back().gap;
    s.iters_to_gap = iterations_to_gap(run.metrics, gap_threshold);

    const std::size_t phase = static_cast<std::size_t>(std::max(cfg.steps, 0));
    const std::size_t early = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(kEarlyFraction * static_cast<double>(phase > 0 ? phase : run.metrics.size()))));
    const std::size_t used = std::min(early, run.metrics.size());
    for (std::size_t k = 0; k < used; ++k) s.early_entropy += run.metrics[k].trajectory_entropy;
    if (used > 0) s.early_entropy /= static_cast<double>(used);

    Rng rng(split_seed(cfg.seed, SeedStream::kEvaluation, index));
    const auto batch = sample_tours(run.policy, inst, cfg.samples_per_step, rng);
    if (const auto c = consistency_metric(run.policy, inst, batch)) s.final_consistency = c->value;

    s.greedy_length = greedy_decode(run.policy, inst).length;
    if (optimum) s.greedy_gap = (s.greedy_length - *optimum) / *optimum;
    return s;
}

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

}  // namespace

nlohmann::json to_json(const InstanceSummary& s) {
    return {{"id", s.id},
            {"optimal_length", opt(s.optimal_length)},
            {"best_length", s.best_length},
            {"final_gap", opt(s.final_gap)},
            {"iters_to_gap", opt(s.iters_to_gap)},
            {"early_entropy", s.early_entropy},
            {"final_consistency", opt(s.final_consistency)},
            {"greedy_length", s.greedy_length},
            {"greedy_gap", opt(s.greedy_gap)},
            {"start_greedy_gap", opt(s.start_greedy_gap)},
            {"start_consistency", opt(s.start_consistency)}};
}

InstanceSummary summary_from_json(const nlohmann::json& j) {
    try {
        InstanceSummary s;
        s.id = j.at("id").get<std::string>();
        s.optimal_length = opt_get<double>(j, "optimal_length");
        s.best_length = j.at("best_length").get<double>();
        s.final_gap = opt_get<double>(j, "final_gap");
        s.iters_to_gap = opt_get<int>(j, "iters_to_gap");
        s.early_entropy = j.at("early_entropy").get<double>();
        s.final_consistency = opt_get<double>(j, "final_consistency");
        s.greedy_length = j.at("greedy_length").get<double>();
        s.greedy_gap = opt_get<double>(j, "greedy_gap");
        s.start_greedy_gap = opt_get<double>(j, "start_greedy_gap");
        s.start_consistency = opt_get<double>(j, "start_consistency");
        return s;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParseError, std::string("instance summary: ") + e.what());
    }
}

double median(std::vector<double> values) {
    if (values.empty()) fail(ErrorCode::kInvalidArgument, "median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double censored_iters(const InstanceSummary& s, int total_steps) {
    return s.iters_to_gap ? static_cast<double>(*s.iters_to_gap) : static_cast<double>(total_steps + 1);
}

RunAggregate aggregate(std::span<const InstanceSummary> summaries, int total_steps) {
    RunAggregate a;
    a.instances = summaries.size();
    if (summaries.empty()) return a;
    std::vector<double> iters;
    double gap_sum = 0.0;
    std::size_t gap_count = 0;
    double cons_sum = 0.0;
    std::size_t cons_count = 0;
    double greedy_sum = 0.0;
    std::size_t greedy_count = 0;
    bool any_optimum = false;
    for (const auto& s : summaries) {
        if (s.iters_to_gap) ++a.reached;
        if (s.optimal_length) {
            any_optimum = true;
            iters.push_back(censored_iters(s, total_steps));
        }
        if (s.final_gap) {
            gap_sum += *s.final_gap;
            ++gap_count;
        }
        if (s.final_consistency) {
            cons_sum += *s.final_consistency;
            ++cons_count;
        }
        if (s.greedy_gap) {
            greedy_sum += *s.greedy_gap;
            ++greedy_count;
        }
        a.mean_early_entropy += s.early_entropy;
    }
    a.mean_early_entropy /= static_cast<double>(summaries.size());
    if (any_optimum) a.median_iters = median(iters);
    if (gap_count > 0) a.mean_final_gap = gap_sum / static_cast<double>(gap_count);
    if (cons_count > 0) a.mean_final_consistency = cons_sum / static_cast<double>(cons_count);
    if (greedy_count > 0) a.mean_greedy_gap = greedy_sum / static_cast<double>(greedy_count);
    return a;
}

nlohmann::json to_json(const RunAggregate& a) {
    return {{"instances", a.instances},
            {"reached_threshold", a.reached},
            {"median_iters_to_gap", opt(a.median_iters)},
            {"mean_final_gap", opt(a.mean_final_gap)},
            {"mean_early_entropy", a.mean_early_entropy},
            {"mean_final_consistency", opt(a.mean_final_consistency)},
            {"mean_greedy_gap", opt(a.mean_greedy_gap)}};
}

}  // namespace prefco::cli

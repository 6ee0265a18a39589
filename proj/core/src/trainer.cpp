#include "prefco/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "prefco/error.hpp"
#include "prefco/local_search.hpp"
#include "prefco/optimizer.hpp"
#include "prefco/parallel.hpp"
#include "prefco/reinforce.hpp"

namespace prefco {

LossResult batch_objective(const SampleBatch& batch, const TrainConfig& cfg) {
    SampleBatch shaped = batch;
    for (double& r : shaped.rewards) r = cfg.reward_scale * r + cfg.reward_shift;
    if (cfg.algorithm == Algorithm::kReinforce) return reinforce_advantages(shaped).as_loss();
    if (cfg.preference.kind == PreferenceKind::kPlackettLuce) {
        return po_loss_pl(cfg.alpha, shaped, cfg.preference.length_control);
    }
    return po_loss_pairwise(cfg.preference, cfg.alpha, shaped, make_labels(shaped.rewards, cfg.tie_tol));
}

std::optional<ConsistencyResult> consistency_from_log_probs(std::span<const double> rewards,
                                                            std::span<const double> log_probs) {
    ConsistencyResult out;
    std::size_t agree = 0;
    for (std::size_t j = 0; j < rewards.size(); ++j) {
        for (std::size_t k = 0; k < rewards.size(); ++k) {
            if (!(rewards[j] > rewards[k])) continue;
            ++out.ordered_pairs;
            if (log_probs[j] > log_probs[k]) {
                ++agree;
            } else if (log_probs[j] == log_probs[k]) {
                ++out.logprob_ties;
            }
        }
    }
    if (out.ordered_pairs == 0) return std::nullopt;
    out.value = static_cast<double>(agree) / static_cast<double>(out.ordered_pairs);
    return out;
}

std::optional<ConsistencyResult> consistency_metric(const HeatmapPolicy& policy, const Instance& inst,
                                                    const SampleBatch& batch) {
    std::vector<double> log_probs;
    log_probs.reserve(batch.size());
    for (const Tour& t : batch.tours) log_probs.push_back(score_tour(policy, inst, t.perm).log_prob);
    return consistency_from_log_probs(batch.rewards, log_probs);
}

TrainResult train_instance(const Instance& inst, const TrainConfig& cfg, std::optional<double> optimal_length,
                           const HeatmapPolicy* warm_start) {
    validate_config(cfg, warm_start != nullptr);
    HeatmapPolicy policy = warm_start ? *warm_start : init_heatmap(inst, cfg.init, cfg.init_scale);
    if (policy.size() != inst.size()) fail(ErrorCode::kInvalidArgument, "warm-start policy size does not match instance");

    Rng rng(cfg.seed);
    Rng ls_rng(split_seed(cfg.seed, SeedStream::kLocalSearch, 0));
    OptimizerState opt_state;
    Matrix grad(inst.size(), inst.size());

    TrainResult result{policy, {}, {}};
    result.best_tour.reward = -std::numeric_limits<double>::infinity();
    result.best_tour.length = std::numeric_limits<double>::infinity();
    const int total = cfg.steps + cfg.finetune_steps;
    result.metrics.reserve(static_cast<std::size_t>(total));

    for (int step = 1; step <= total; ++step) {
        const bool finetune = step > cfg.steps;
        SampleBatch batch = sample_tours(policy, inst, cfg.samples_per_step, rng);
        const std::size_t sampled = batch.size();
        if (finetune) batch = make_finetune_pairs(policy, inst, batch, cfg.ls, ls_rng);

        const LossResult objective = batch_objective(batch, cfg);

        grad.fill(0.0);
        const auto nd = static_cast<double>(batch.size());
        for (std::size_t j = 0; j < batch.size(); ++j) {
            if (objective.advantages[j] == 0.0) continue;
            accumulate_grad_log_prob(policy, batch.tours[j].perm, objective.advantages[j] / nd, grad);
        }

        StepMetrics m;
        m.step = step;
        m.finetune = finetune;
        m.loss = objective.loss;
        m.advantages = objective.advantages;
        double reward_sum = 0.0;
        double entropy_sum = 0.0;
        for (std::size_t j = 0; j < sampled; ++j) {
            reward_sum += batch.rewards[j];
            entropy_sum += batch.trajectory_entropy(j);
        }
        m.mean_reward = reward_sum / static_cast<double>(sampled);
        m.trajectory_entropy = entropy_sum / static_cast<double>(sampled);
        for (const Tour& t : batch.tours) {
            if (t.reward > result.best_tour.reward) result.best_tour = t;
        }
        m.best_reward = result.best_tour.reward;
        if (optimal_length) m.gap = (result.best_tour.length - *optimal_length) / *optimal_length;
        if (auto c = consistency_from_log_probs(batch.rewards, batch.log_probs)) m.consistency = c->value;
        result.metrics.push_back(std::move(m));

        optimizer_step(policy.theta().data(), grad.data(), opt_state, cfg.optimizer);
    }
    result.policy = std::move(policy);
    return result;
}

TrainConfig config_for_instance(const TrainConfig& cfg, std::size_t index) {
    TrainConfig local = cfg;
    local.seed = split_seed(cfg.seed, SeedStream::kTraining, index);
    return local;
}

std::vector<TrainResult> train_many(std::span<const Instance> instances, const TrainConfig& cfg,
                                    std::span<const std::optional<double>> optimal_lengths,
                                    std::span<const HeatmapPolicy> warm_starts, int jobs) {
    if (!optimal_lengths.empty() && optimal_lengths.size() != instances.size()) {
        fail(ErrorCode::kInvalidArgument, "optimal_lengths must match the instance count");
    }
    if (!warm_starts.empty() && warm_starts.size() != instances.size()) {
        fail(ErrorCode::kInvalidArgument, "warm_starts must match the instance count");
    }
    validate_config(cfg, !warm_starts.empty());
    std::vector<std::optional<TrainResult>> slots(instances.size());
    parallel_for(instances.size(), jobs, [&](std::size_t i) {
        const TrainConfig local = config_for_instance(cfg, i);
        const std::optional<double> opt = optimal_lengths.empty() ? std::nullopt : optimal_lengths[i];
        slots[i] = train_instance(instances[i], local, opt, warm_starts.empty() ? nullptr : &warm_starts[i]);
    });
    std::vector<TrainResult> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<AdvantagePoint> advantage_report(const SampleBatch& batch, const TrainConfig& cfg) {
    if (batch.size() == 0) fail(ErrorCode::kInvalidArgument, "advantage report needs a nonempty batch");
    const LossResult objective = batch_objective(batch, cfg);
    std::vector<AdvantagePoint> points(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) points[i] = {batch.tours[i].length, objective.advantages[i]};
    std::stable_sort(points.begin(), points.end(),
                     [](const AdvantagePoint& a, const AdvantagePoint& b) { return a.length < b.length; });
    return points;
}

std::optional<int> iterations_to_gap(std::span<const StepMetrics> metrics, double threshold) {
    for (const StepMetrics& m : metrics) {
        if (m.gap && *m.gap <= threshold) return m.step;
    }
    return std::nullopt;
}

AlphaSelection select_alpha(std::span<const Instance> instances, const TrainConfig& cfg,
                            std::span<const std::optional<double>> optimal_lengths, std::span<const double> grid,
                            int jobs) {
    if (grid.empty()) fail(ErrorCode::kInvalidArgument, "alpha grid is empty");
    if (instances.empty()) fail(ErrorCode::kInvalidArgument, "alpha selection needs instances");
    AlphaSelection sel;
    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        TrainConfig local = cfg;
        local.alpha = grid[g];
        const auto runs = train_many(instances, local, optimal_lengths, {}, jobs);
        double final_sum = 0.0;
        double area_sum = 0.0;
        for (const TrainResult& r : runs) {
            // Without an optimum, score by tour length (lower is still better).
            auto score = [](const StepMetrics& m) { return m.gap ? *m.gap : -m.best_reward; };
            final_sum += score(r.metrics.back());
            double area = 0.0;
            for (const StepMetrics& m : r.metrics) area += score(m);
            area_sum += area / static_cast<double>(r.metrics.size());
        }
        const auto count = static_cast<double>(runs.size());
        sel.final_scores.push_back(final_sum / count);
        sel.area_scores.push_back(area_sum / count);
        // Final scores within kAlphaTieTolerance count as tied: two runs that both end
        // at the optimum can differ by summation-order rounding.
        const double diff = sel.final_scores[g] - sel.final_scores[best];
        const bool better = diff < -kAlphaTieTolerance ||
                            (std::abs(diff) <= kAlphaTieTolerance && sel.area_scores[g] < sel.area_scores[best]);
        if (g == 0 || better) best = g;
    }
    sel.alpha = grid[best];
    return sel;
}

std::string metrics_to_csv(std::span<const StepMetrics> metrics) {
    std::ostringstream out;
    out << "step,mean_reward,best_reward,gap,entropy,consistency,loss\n";
    for (const StepMetrics& m : metrics) {
        out << m.step << ',' << format_double(m.mean_reward) << ',' << format_double(m.best_reward) << ','
            << (m.gap ? format_double(*m.gap) : "") << ',' << format_double(m.trajectory_entropy) << ','
            << (m.consistency ? format_double(*m.consistency) : "") << ',' << format_double(m.loss) << '\n';
    }
    return out.str();
}

}  // namespace prefco

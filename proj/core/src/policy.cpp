#include "prefco/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <json.hpp>

#include "prefco/error.hpp"

namespace prefco {

HeatmapPolicy::HeatmapPolicy(std::size_t n, double temperature) : theta_(n, n, 0.0) {
    if (n < 3) fail(ErrorCode::kInvalidArgument, "policy needs at least 3 nodes");
    set_temperature(temperature);
}

HeatmapPolicy::HeatmapPolicy(Matrix theta, double temperature) : theta_(std::move(theta)) {
    if (theta_.rows() != theta_.cols() || theta_.rows() < 3) {
        fail(ErrorCode::kInvalidArgument, "theta must be a square matrix with at least 3 rows");
    }
    for (double v : theta_.data()) {
        if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "theta entries must be finite");
    }
    set_temperature(temperature);
}

void HeatmapPolicy::set_temperature(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::kInvalidArgument, "temperature must be positive");
    temperature_ = t;
}

HeatmapPolicy init_heatmap(const Instance& inst, HeatmapInit mode, double scale) {
    const std::size_t n = inst.size();
    HeatmapPolicy policy(n);
    if (mode == HeatmapInit::kZeros) return policy;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        fail(ErrorCode::kInvalidArgument, "neg_distance init needs scale > 0");
    }
    Matrix& theta = policy.theta();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) theta(i, j) = i == j ? 0.0 : -inst.distance(i, j) * scale;
    }
    return policy;
}

double SampleBatch::trajectory_entropy(std::size_t i) const {
    double total = 0.0;
    for (double h : step_entropies[i]) total += h;
    return total;
}

void SampleBatch::append(Tour tour, double log_prob, std::vector<double> entropies) {
    rewards.push_back(tour.reward);
    tours.push_back(std::move(tour));
    log_probs.push_back(log_prob);
    step_entropies.push_back(std::move(entropies));
}

namespace {

// Masked softmax over the unvisited nodes from `current`. Visited nodes are left
// out of the sum entirely instead of being set to -inf.
struct StepDistribution {
    std::vector<int> candidates;
    std::vector<double> shifted;  // z_j - max z
    std::vector<double> probs;
    double log_sum = 0.0;         // log sum exp(shifted)
    double entropy = 0.0;

    void compute(const HeatmapPolicy& policy, int current, const std::vector<char>& visited) {
        const std::size_t n = policy.size();
        const double temp = policy.temperature();
        candidates.clear();
        shifted.clear();
        probs.clear();
        double max_z = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (visited[j]) continue;
            const double z = policy.logit(static_cast<std::size_t>(current), j) / temp;
            candidates.push_back(static_cast<int>(j));
            shifted.push_back(z);
            max_z = std::max(max_z, z);
        }
        double sum = 0.0;
        for (double& z : shifted) {
            z -= max_z;
            const double e = std::exp(z);
            probs.push_back(e);
            sum += e;
        }
        log_sum = std::log(sum);
        double expected_shift = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            probs[k] /= sum;
            expected_shift += probs[k] * shifted[k];
        }
        entropy = std::clamp(log_sum - expected_shift, 0.0, std::log(static_cast<double>(probs.size())));
    }

    double log_prob(std::size_t k) const { return shifted[k] - log_sum; }
};

// One decoding loop shared by sampling, scoring, greedy decoding and the gradient.
// `choose` picks a candidate slot given the step distribution; `visit` observes it.
template <typename Choose, typename Visit>
void decode(const HeatmapPolicy& policy, Permutation& perm, double& log_prob, std::vector<double>& entropies,
            Choose&& choose, Visit&& visit) {
    const std::size_t n = policy.size();
    std::vector<char> visited(n, 0);
    StepDistribution dist;
    perm.assign(1, kStartNode);
    visited[kStartNode] = 1;
    log_prob = 0.0;
    entropies.clear();
    entropies.reserve(n - 1);
    int current = kStartNode;
    for (std::size_t t = 1; t < n; ++t) {
        dist.compute(policy, current, visited);
        const std::size_t slot = choose(t, dist);
        const int next = dist.candidates[slot];
        visit(current, slot, dist);
        log_prob += dist.log_prob(slot);
        entropies.push_back(dist.entropy);
        perm.push_back(next);
        visited[static_cast<std::size_t>(next)] = 1;
        current = next;
    }
}

constexpr auto kNoVisit = [](int, std::size_t, const StepDistribution&) {};

Permutation rotated_to_start(std::span<const int> perm) {
    const auto it = std::find(perm.begin(), perm.end(), kStartNode);
    Permutation out(perm.begin(), perm.end());
    std::rotate(out.begin(), out.begin() + (it - perm.begin()), out.end());
    return out;
}

// Slot of `node` among the step's candidates; the caller has validated perm.
std::size_t slot_of(const StepDistribution& dist, int node) {
    const auto it = std::lower_bound(dist.candidates.begin(), dist.candidates.end(), node);
    return static_cast<std::size_t>(it - dist.candidates.begin());
}

void check_size(const HeatmapPolicy& policy, const Instance& inst) {
    if (policy.size() != inst.size()) {
        fail(ErrorCode::kInvalidArgument, "policy has " + std::to_string(policy.size()) + " nodes, instance has " +
                                              std::to_string(inst.size()));
    }
}

}  // namespace

SampleBatch sample_tours(const HeatmapPolicy& policy, const Instance& inst, int count, Rng& rng) {
    check_size(policy, inst);
    if (count < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 samples per batch, got " + std::to_string(count));
    SampleBatch batch;
    const auto n_samples = static_cast<std::size_t>(count);
    batch.tours.reserve(n_samples);
    batch.log_probs.reserve(n_samples);
    batch.step_entropies.reserve(n_samples);
    batch.rewards.reserve(n_samples);

    auto choose = [&rng](std::size_t, const StepDistribution& dist) {
        const double u = uniform01(rng);
        double cumulative = 0.0;
        for (std::size_t k = 0; k + 1 < dist.probs.size(); ++k) {
            cumulative += dist.probs[k];
            if (u < cumulative) return k;
        }
        return dist.probs.size() - 1;
    };
    for (std::size_t s = 0; s < n_samples; ++s) {
        Permutation perm;
        double log_prob = 0.0;
        std::vector<double> entropies;
        decode(policy, perm, log_prob, entropies, choose, kNoVisit);
        batch.append(make_tour(inst, std::move(perm)), log_prob, std::move(entropies));
    }
    return batch;
}

TourScore score_tour(const HeatmapPolicy& policy, const Instance& inst, std::span<const int> perm) {
    check_size(policy, inst);
    validate_permutation(perm, inst.size());
    const Permutation target = rotated_to_start(perm);
    TourScore score;
    Permutation decoded;
    decode(
        policy, decoded, score.log_prob, score.step_entropies,
        [&target](std::size_t t, const StepDistribution& dist) { return slot_of(dist, target[t]); }, kNoVisit);
    return score;
}

void accumulate_grad_log_prob(const HeatmapPolicy& policy, std::span<const int> perm, double weight, Matrix& grad) {
    validate_permutation(perm, policy.size());
    if (grad.rows() != policy.size() || grad.cols() != policy.size()) {
        fail(ErrorCode::kInvalidArgument, "gradient matrix shape does not match policy");
    }
    const Permutation target = rotated_to_start(perm);
    const double scale = weight / policy.temperature();
    Permutation decoded;
    double log_prob = 0.0;
    std::vector<double> entropies;
    decode(
        policy, decoded, log_prob, entropies,
        [&target](std::size_t t, const StepDistribution& dist) { return slot_of(dist, target[t]); },
        [&grad, scale](int current, std::size_t chosen, const StepDistribution& dist) {
            const auto c = static_cast<std::size_t>(current);
            for (std::size_t k = 0; k < dist.candidates.size(); ++k) {
                const double indicator = k == chosen ? 1.0 : 0.0;
                grad(c, static_cast<std::size_t>(dist.candidates[k])) += scale * (indicator - dist.probs[k]);
            }
        });
}

Matrix grad_log_prob(const HeatmapPolicy& policy, const Instance& inst, std::span<const int> perm) {
    check_size(policy, inst);
    Matrix grad(policy.size(), policy.size(), 0.0);
    accumulate_grad_log_prob(policy, perm, 1.0, grad);
    return grad;
}

Tour greedy_decode(const HeatmapPolicy& policy, const Instance& inst) {
    check_size(policy, inst);
    Permutation perm;
    double log_prob = 0.0;
    std::vector<double> entropies;
    decode(
        policy, perm, log_prob, entropies,
        [](std::size_t, const StepDistribution& dist) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < dist.shifted.size(); ++k) {
                if (dist.shifted[k] > dist.shifted[best]) best = k;
            }
            return best;
        },
        kNoVisit);
    return make_tour(inst, std::move(perm));
}

std::string policy_to_json(const HeatmapPolicy& policy) {
    nlohmann::json j;
    j["n"] = policy.size();
    j["temperature"] = policy.temperature();
    j["theta"] = std::vector<double>(policy.theta().data().begin(), policy.theta().data().end());
    return j.dump();
}

HeatmapPolicy policy_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParseError, std::string("policy JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("theta") || !j["n"].is_number_integer() ||
        !j["theta"].is_array()) {
        fail(ErrorCode::kParseError, "policy JSON needs integer \"n\" and array \"theta\"");
    }
    const auto n = j["n"].get<long>();
    if (n < 3) fail(ErrorCode::kParseError, "policy n must be >= 3");
    const auto& values = j["theta"];
    if (values.size() != static_cast<std::size_t>(n * n)) {
        fail(ErrorCode::kParseError, "theta must hold n*n = " + std::to_string(n * n) + " values");
    }
    Matrix theta(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k].is_number()) fail(ErrorCode::kParseError, "theta entries must be numbers");
        theta.data()[k] = values[k].get<double>();
    }
    const double temperature = j.contains("temperature") ? j["temperature"].get<double>() : 1.0;
    return HeatmapPolicy(std::move(theta), temperature);
}

}  // namespace prefco

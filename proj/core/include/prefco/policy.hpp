#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefco/instance.hpp"
#include "prefco/matrix.hpp"
#include "prefco/rng.hpp"

namespace prefco {

/// Every tour is decoded from this node, which makes tour probabilities well defined
/// (no rotation degeneracy).
inline constexpr int kStartNode = 0;

enum class HeatmapInit { kZeros, kNegDistance };

/// Per-instance edge-logit matrix. From current node c with unvisited set F the next
/// node j is drawn with probability softmax_{j in F}(theta(c, j) / temperature).
class HeatmapPolicy {
public:
    explicit HeatmapPolicy(std::size_t n, double temperature = 1.0);
    HeatmapPolicy(Matrix theta, double temperature);

    std::size_t size() const noexcept { return theta_.rows(); }
    double temperature() const noexcept { return temperature_; }
    void set_temperature(double t);

    const Matrix& theta() const noexcept { return theta_; }
    Matrix& theta() noexcept { return theta_; }

    double logit(std::size_t from, std::size_t to) const noexcept { return theta_(from, to); }

private:
    Matrix theta_;
    double temperature_ = 1.0;
};

HeatmapPolicy init_heatmap(const Instance& inst, HeatmapInit mode, double scale = 1.0);

/// N sampled tours plus everything the losses and diagnostics need.
struct SampleBatch {
    std::vector<Tour> tours;
    std::vector<double> log_probs;
    std::vector<std::vector<double>> step_entropies;
    std::vector<double> rewards;

    std::size_t size() const noexcept { return tours.size(); }
    /// Number of decoding decisions for tour i (n - 1 for a full TSP tour).
    std::size_t step_count(std::size_t i) const noexcept { return step_entropies[i].size(); }
    double trajectory_entropy(std::size_t i) const;
    void append(Tour tour, double log_prob, std::vector<double> entropies);
};

SampleBatch sample_tours(const HeatmapPolicy& policy, const Instance& inst, int count, Rng& rng);

struct TourScore {
    double log_prob = 0.0;
    std::vector<double> step_entropies;
};

/// Exact log-probability of decoding perm. A perm that does not start at node 0 is
/// rotated first (same closed tour); its direction is kept as given.
TourScore score_tour(const HeatmapPolicy& policy, const Instance& inst, std::span<const int> perm);

/// d log pi(perm) / d theta as a dense n x n matrix.
Matrix grad_log_prob(const HeatmapPolicy& policy, const Instance& inst, std::span<const int> perm);

/// grad += weight * d log pi(perm) / d theta, without allocating a matrix.
void accumulate_grad_log_prob(const HeatmapPolicy& policy, std::span<const int> perm, double weight, Matrix& grad);

/// Argmax decoding; ties go to the lowest node index.
Tour greedy_decode(const HeatmapPolicy& policy, const Instance& inst);

/// Checkpoint format: {"n": int, "temperature": float, "theta": row-major array}.
std::string policy_to_json(const HeatmapPolicy& policy);
HeatmapPolicy policy_from_json(std::string_view text);

}  // namespace prefco

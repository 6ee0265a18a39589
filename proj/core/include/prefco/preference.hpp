#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "prefco/policy.hpp"

namespace prefco {

enum class PreferenceKind { kBradleyTerry, kThurstone, kPlackettLuce, kExponential };

std::string_view to_string(PreferenceKind kind);
/// Accepts the config spellings bt, thurstone, pl, exp.
PreferenceKind parse_preference_kind(std::string_view name);

/// Maps an implied-reward difference z to a win probability f(z - margin):
///   bradley_terry  f = sigmoid
///   thurstone      f = standard normal CDF
///   exponential    f = exp (unbounded; the weight f'/f is constant)
///   plackett_luce  full-ranking likelihood, see po_loss_pl
struct PreferenceModel {
    PreferenceKind kind = PreferenceKind::kBradleyTerry;
    double margin = 0.0;
    bool length_control = false;
};

inline constexpr double kDefaultTieTolerance = 1e-12;

/// Pairwise win matrix, y(j, k) = 1 iff reward j beats reward k by more than the
/// tie tolerance. Induced by a real-valued reward, so it is acyclic.
class PreferenceLabels {
public:
    PreferenceLabels() = default;
    explicit PreferenceLabels(std::size_t n) : n_(n), wins_(n * n, 0) {}

    std::size_t size() const noexcept { return n_; }
    bool at(std::size_t j, std::size_t k) const noexcept { return wins_[j * n_ + k] != 0; }
    void set(std::size_t j, std::size_t k, bool v) noexcept { wins_[j * n_ + k] = v ? 1 : 0; }
    std::size_t wins(std::size_t j) const noexcept;
    std::size_t losses(std::size_t j) const noexcept;

    friend bool operator==(const PreferenceLabels&, const PreferenceLabels&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> wins_;
};

PreferenceLabels make_labels(std::span<const double> rewards, double tie_tol = kDefaultTieTolerance);

/// alpha * (log pi(tau1) - log pi(tau2)). The alpha * log Z(x) terms of the
/// reparameterized reward cancel, so Z is never needed.
double implied_reward_diff(double alpha, double log_prob_1, double log_prob_2);

/// Stable log Phi(z) for the standard normal CDF, valid far into the lower tail.
double normal_log_cdf(double z);
/// phi(z) / Phi(z), finite for every finite z.
double normal_hazard(double z);

/// log f(z - margin).
double log_preference(const PreferenceModel& model, double z);
/// f'(z - margin) / f(z - margin): sigmoid(-(z - margin)) for Bradley-Terry,
/// phi/Phi for Thurstone, 1 for exponential.
double pair_weight(const PreferenceModel& model, double z);

/// A scalar loss plus per-tour advantages A_j chosen so that
///   d loss / d theta = -(1/N) * sum_j A_j * d log pi(tau_j) / d theta.
/// REINFORCE results use the same convention.
struct LossResult {
    double loss = 0.0;
    std::vector<double> advantages;
};

/// Pairwise preference loss over all ordered pairs of the batch:
///   loss = -(1/N^2) sum_{j,k} y(j,k) log f(rhat_j - rhat_k - margin),
///   rhat_j = alpha * log pi(tau_j)  (divided by tau_j's step count under length control).
/// The 1/N^2 matches a mean over the full N x N grid, diagonal included.
LossResult po_loss_pairwise(const PreferenceModel& model, double alpha, const SampleBatch& batch,
                            const PreferenceLabels& labels);

/// Plackett-Luce negative log-likelihood of the reward ranking (best first, ties by
/// sample index). Unnormalized: for N = 2 it equals N^2 = 4 times the pairwise
/// Bradley-Terry loss, and its advantages are 4 times the Bradley-Terry ones.
LossResult po_loss_pl(double alpha, const SampleBatch& batch, bool length_control = false);

/// Dispatches on model.kind.
LossResult po_loss(const PreferenceModel& model, double alpha, const SampleBatch& batch,
                   const PreferenceLabels& labels);

}  // namespace prefco

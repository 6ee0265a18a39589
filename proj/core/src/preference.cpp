#include "prefco/preference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "prefco/error.hpp"

namespace prefco {

std::string_view to_string(PreferenceKind kind) {
    switch (kind) {
    case PreferenceKind::kBradleyTerry:
        return "bt";
    case PreferenceKind::kThurstone:
        return "thurstone";
    case PreferenceKind::kPlackettLuce:
        return "pl";
    case PreferenceKind::kExponential:
        return "exp";
    }
    return "bt";
}

PreferenceKind parse_preference_kind(std::string_view name) {
    if (name == "bt" || name == "bradley_terry") return PreferenceKind::kBradleyTerry;
    if (name == "thurstone" || name == "th") return PreferenceKind::kThurstone;
    if (name == "pl" || name == "plackett_luce") return PreferenceKind::kPlackettLuce;
    if (name == "exp" || name == "exponential") return PreferenceKind::kExponential;
    fail(ErrorCode::kInvalidArgument, "unknown preference model '" + std::string(name) + "'");
}

std::size_t PreferenceLabels::wins(std::size_t j) const noexcept {
    std::size_t c = 0;
    for (std::size_t k = 0; k < n_; ++k) c += wins_[j * n_ + k];
    return c;
}

std::size_t PreferenceLabels::losses(std::size_t j) const noexcept {
    std::size_t c = 0;
    for (std::size_t k = 0; k < n_; ++k) c += wins_[k * n_ + j];
    return c;
}

PreferenceLabels make_labels(std::span<const double> rewards, double tie_tol) {
    if (rewards.size() < 2) fail(ErrorCode::kInvalidArgument, "labels need at least 2 rewards");
    if (!(tie_tol >= 0.0)) fail(ErrorCode::kInvalidArgument, "tie tolerance must be >= 0");
    const std::size_t n = rewards.size();
    PreferenceLabels labels(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) labels.set(j, k, rewards[j] - rewards[k] > tie_tol);
    }
    return labels;
}

double implied_reward_diff(double alpha, double log_prob_1, double log_prob_2) {
    if (!(alpha > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha must be > 0");
    return alpha * (log_prob_1 - log_prob_2);
}

namespace {

constexpr double kTailSwitch = -20.0;

double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Lower-tail reciprocal Mills ratio phi(-t)/Phi(-t) for t >= 20 by the continued
// fraction Phi(-t)/phi(t) = 1/(t+ 1/(t+ 2/(t+ 3/(t+ ...)))), evaluated bottom-up.
double lower_tail_hazard(double t) {
    double f = t;
    for (int k = 60; k >= 1; --k) f = t + k / f;
    return f;
}

double normal_log_pdf(double z) { return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi); }

}  // namespace

double normal_log_cdf(double z) {
    if (z < kTailSwitch) return normal_log_pdf(z) - std::log(lower_tail_hazard(-z));
    if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
    return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
}

double normal_hazard(double z) {
    if (z < kTailSwitch) return lower_tail_hazard(-z);
    const double pdf = std::exp(normal_log_pdf(z));
    return pdf / (0.5 * std::erfc(-z / std::numbers::sqrt2));
}

double log_preference(const PreferenceModel& model, double z) {
    const double x = z - model.margin;
    switch (model.kind) {
    case PreferenceKind::kBradleyTerry:
        return log_sigmoid(x);
    case PreferenceKind::kThurstone:
        return normal_log_cdf(x);
    case PreferenceKind::kExponential:
        return x;
    case PreferenceKind::kPlackettLuce:
        break;
    }
    fail(ErrorCode::kWrongModel, "Plackett-Luce has no pairwise preference function");
}

double pair_weight(const PreferenceModel& model, double z) {
    const double x = z - model.margin;
    switch (model.kind) {
    case PreferenceKind::kBradleyTerry:
        return sigmoid(-x);
    case PreferenceKind::kThurstone:
        return normal_hazard(x);
    case PreferenceKind::kExponential:
        return 1.0;
    case PreferenceKind::kPlackettLuce:
        break;
    }
    fail(ErrorCode::kWrongModel, "Plackett-Luce has no pairwise weight");
}

namespace {

// Per-tour multiplier on log pi: alpha, or alpha / |tau| under length control.
std::vector<double> reward_scales(double alpha, const SampleBatch& batch, bool length_control) {
    std::vector<double> scales(batch.size(), alpha);
    if (length_control) {
        for (std::size_t j = 0; j < batch.size(); ++j) {
            const auto steps = static_cast<double>(std::max<std::size_t>(batch.step_count(j), 1));
            scales[j] = alpha / steps;
        }
    }
    return scales;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::kInvalidArgument, "alpha must be > 0");
}

}  // namespace

LossResult po_loss_pairwise(const PreferenceModel& model, double alpha, const SampleBatch& batch,
                            const PreferenceLabels& labels) {
    if (model.kind == PreferenceKind::kPlackettLuce) {
        fail(ErrorCode::kWrongModel, "Plackett-Luce is a ranking model; use po_loss_pl");
    }
    check_alpha(alpha);
    const std::size_t n = batch.size();
    if (labels.size() != n || batch.log_probs.size() != n) {
        fail(ErrorCode::kInvalidArgument, "batch has " + std::to_string(n) + " tours but labels cover " +
                                              std::to_string(labels.size()));
    }
    if (n < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 tours");

    const std::vector<double> scales = reward_scales(alpha, batch, model.length_control);
    std::vector<double> implied(n);
    for (std::size_t j = 0; j < n; ++j) implied[j] = scales[j] * batch.log_probs[j];

    // net[j] = sum_k g(j,k) - g(k,j), g(j,k) = y(j,k) * f'/f(rhat_j - rhat_k - margin).
    std::vector<double> net(n, 0.0);
    double log_likelihood = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!labels.at(j, k)) continue;
            const double z = implied[j] - implied[k];
            log_likelihood += log_preference(model, z);
            const double g = pair_weight(model, z);
            net[j] += g;
            net[k] -= g;
        }
    }

    const auto nd = static_cast<double>(n);
    LossResult out;
    out.loss = -log_likelihood / (nd * nd);
    out.advantages.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.advantages[j] = scales[j] * net[j] / nd;
    return out;
}

LossResult po_loss_pl(double alpha, const SampleBatch& batch, bool length_control) {
    check_alpha(alpha);
    const std::size_t n = batch.size();
    if (n < 2) fail(ErrorCode::kInvalidArgument, "Plackett-Luce needs at least 2 tours");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return batch.rewards[a] > batch.rewards[b]; });

    const std::vector<double> scales = reward_scales(alpha, batch, length_control);
    std::vector<double> ranked(n);
    for (std::size_t k = 0; k < n; ++k) ranked[k] = scales[order[k]] * batch.log_probs[order[k]];

    // suffix_lse[k] = log sum_{j >= k} exp(ranked[j]).
    std::vector<double> suffix_lse(n);
    suffix_lse[n - 1] = ranked[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        const double hi = std::max(ranked[k], suffix_lse[k + 1]);
        suffix_lse[k] = hi + std::log(std::exp(ranked[k] - hi) + std::exp(suffix_lse[k + 1] - hi));
    }

    double loss = 0.0;
    for (std::size_t k = 0; k < n; ++k) loss -= ranked[k] - suffix_lse[k];

    // d loss / d ranked[m] = -1 + sum_{k <= m} exp(ranked[m] - suffix_lse[k]).
    LossResult out;
    out.loss = loss;
    out.advantages.assign(n, 0.0);
    const auto nd = static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        double d = -1.0;
        for (std::size_t k = 0; k <= m; ++k) d += std::exp(ranked[m] - suffix_lse[k]);
        const std::size_t tour = order[m];
        out.advantages[tour] = -nd * scales[tour] * d;
    }
    return out;
}

LossResult po_loss(const PreferenceModel& model, double alpha, const SampleBatch& batch,
                   const PreferenceLabels& labels) {
    if (model.kind == PreferenceKind::kPlackettLuce) return po_loss_pl(alpha, batch, model.length_control);
    return po_loss_pairwise(model, alpha, batch, labels);
}

}  // namespace prefco

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "prefco/config.hpp"
#include "prefco/error.hpp"
#include "prefco/instance.hpp"
#include "prefco/policy.hpp"
#include "prefco/rng.hpp"
#include "prefco/trainer.hpp"

namespace prefco::testing {

// Code of the prefco::Error thrown by f; records a failure when f does not throw.
inline ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a prefco::Error";
    return ErrorCode::kIo;
}

inline Instance unit_square() { return Instance("square", {{0, 0}, {0, 1}, {1, 1}, {1, 0}}); }
inline Instance triangle_345() { return Instance("tri", {{0, 0}, {3, 0}, {0, 4}}); }

inline Instance random_instance(int n, std::uint64_t seed) { return generate_uniform(n, 1, seed).front(); }

inline HeatmapPolicy random_policy(std::size_t n, Rng& rng, double spread = 2.0) {
    HeatmapPolicy policy(n);
    for (double& v : policy.theta().data()) v = spread * (2.0 * uniform01(rng) - 1.0);
    return policy;
}

// Uniformly random permutation that starts at node 0.
inline Permutation random_perm(std::size_t n, Rng& rng) {
    Permutation perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    shuffle(perm.data() + 1, n - 1, rng);
    return perm;
}

// Builds a batch for fixed tours, scoring each one under `policy`.
inline SampleBatch score_batch(const HeatmapPolicy& policy, const Instance& inst, const std::vector<Permutation>& perms) {
    SampleBatch batch;
    for (const auto& p : perms) {
        auto s = score_tour(policy, inst, p);
        batch.append(make_tour(inst, p), s.log_prob, std::move(s.step_entropies));
    }
    return batch;
}

// Loss of cfg's objective as a function of theta, with the tours (and therefore
// rewards and labels) held fixed.
inline double objective_loss(const HeatmapPolicy& policy, const Instance& inst, const std::vector<Permutation>& perms,
                             const TrainConfig& cfg) {
    return batch_objective(score_batch(policy, inst, perms), cfg).loss;
}

// d loss / d theta from the advantages: -(1/N) sum_j A_j grad log pi_j.
inline Matrix analytic_loss_grad(const HeatmapPolicy& policy, const Instance& inst,
                                 const std::vector<Permutation>& perms, const TrainConfig& cfg) {
    const auto result = batch_objective(score_batch(policy, inst, perms), cfg);
    Matrix grad(policy.size(), policy.size(), 0.0);
    const double n = static_cast<double>(perms.size());
    for (std::size_t j = 0; j < perms.size(); ++j) {
        accumulate_grad_log_prob(policy, perms[j], -result.advantages[j] / n, grad);
    }
    return grad;
}

// Central differences of f over every theta entry.
inline Matrix finite_difference(const HeatmapPolicy& policy, const std::function<double(const HeatmapPolicy&)>& f,
                                double h = 1e-5) {
    const std::size_t n = policy.size();
    Matrix grad(n, n, 0.0);
    HeatmapPolicy probe = policy;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double saved = probe.theta()(i, j);
            probe.theta()(i, j) = saved + h;
            const double up = f(probe);
            probe.theta()(i, j) = saved - h;
            const double down = f(probe);
            probe.theta()(i, j) = saved;
            grad(i, j) = (up - down) / (2.0 * h);
        }
    }
    return grad;
}

// Entrywise |a - b| / max(|a|, |b|, floor); the floor keeps entries that are zero in
// both from dividing by zero.
inline double max_relative_error(const Matrix& a, const Matrix& b, double floor = 1e-6) {
    double worst = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) {
        const double scale = std::max({std::abs(da[k]), std::abs(db[k]), floor});
        worst = std::max(worst, std::abs(da[k] - db[k]) / scale);
    }
    return worst;
}

}  // namespace prefco::testing

namespace prefco::testing {

// A batch carrying only what the losses read: rewards, log-probs and step counts.
inline SampleBatch synthetic_batch(const std::vector<double>& log_probs, const std::vector<double>& rewards,
                                   std::size_t steps = 5) {
    SampleBatch batch;
    for (std::size_t i = 0; i < log_probs.size(); ++i) {
        Tour t;
        t.length = -rewards[i];
        t.reward = rewards[i];
        batch.append(std::move(t), log_probs[i], std::vector<double>(steps, 0.0));
    }
    return batch;
}

inline std::vector<double> uniform_vector(std::size_t n, Rng& rng, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * uniform01(rng);
    return v;
}

}  // namespace prefco::testing

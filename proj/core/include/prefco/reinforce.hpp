#pragma once

#include <vector>

#include "prefco/policy.hpp"
#include "prefco/preference.hpp"

namespace prefco {

/// Shared-baseline REINFORCE: b = mean batch reward, A_i = r_i - b, and the
/// score-function surrogate loss = -(1/N) sum_i A_i log pi(tau_i) with A held
/// constant. Its gradient follows the LossResult convention.
struct ReinforceBatchResult {
    double baseline = 0.0;
    std::vector<double> advantages;
    double loss = 0.0;

    LossResult as_loss() const { return {loss, advantages}; }
};

ReinforceBatchResult reinforce_advantages(const SampleBatch& batch);

}  // namespace prefco

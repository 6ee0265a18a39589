#include "prefco/reinforce.hpp"

#include "prefco/error.hpp"

namespace prefco {

ReinforceBatchResult reinforce_advantages(const SampleBatch& batch) {
    const std::size_t n = batch.size();
    if (n < 2) fail(ErrorCode::kInvalidArgument, "REINFORCE needs at least 2 tours per batch");
    if (batch.rewards.size() != n || batch.log_probs.size() != n) {
        fail(ErrorCode::kInvalidArgument, "batch rewards/log_probs size mismatch");
    }
    const auto nd = static_cast<double>(n);
    ReinforceBatchResult out;
    double sum = 0.0;
    for (double r : batch.rewards) sum += r;
    out.baseline = sum / nd;
    out.advantages.resize(n);
    double surrogate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.advantages[i] = batch.rewards[i] - out.baseline;
        surrogate += out.advantages[i] * batch.log_probs[i];
    }
    out.loss = -surrogate / nd;
    return out;
}

}  // namespace prefco

#include "prefco/optimizer.hpp"

#include <cmath>
#include <string>

#include "prefco/error.hpp"

namespace prefco {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::kSgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "sgd") return OptimizerKind::kSgd;
    if (name == "adam") return OptimizerKind::kAdam;
    fail(ErrorCode::kInvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

void optimizer_step(std::span<double> theta, std::span<const double> grad, OptimizerState& state,
                    const OptimizerConfig& cfg) {
    if (theta.size() != grad.size()) {
        fail(ErrorCode::kInvalidArgument, "theta has " + std::to_string(theta.size()) + " entries, gradient has " +
                                              std::to_string(grad.size()));
    }
    if (!(cfg.learning_rate > 0.0)) fail(ErrorCode::kInvalidArgument, "learning rate must be > 0");

    if (cfg.kind == OptimizerKind::kSgd) {
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += cfg.learning_rate * grad[i];
        ++state.step;
        return;
    }

    if (state.first_moment.empty() && state.second_moment.empty()) {
        state.first_moment.assign(theta.size(), 0.0);
        state.second_moment.assign(theta.size(), 0.0);
    }
    if (state.first_moment.size() != theta.size() || state.second_moment.size() != theta.size()) {
        fail(ErrorCode::kInvalidArgument, "optimizer state does not match parameter count");
    }
    ++state.step;
    const double correction1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double correction2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad[i];
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad[i] * grad[i];
        const double m_hat = m / correction1;
        const double v_hat = v / correction2;
        theta[i] += cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

}  // namespace prefco

#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace prefco {

enum class OptimizerKind { kSgd, kAdam };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::kAdam;
    double learning_rate = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct OptimizerState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step = 0;
};

/// Gradient *ascent*: sgd does theta += lr * grad; adam uses bias-corrected moment
/// estimates. State is sized lazily on the first call.
void optimizer_step(std::span<double> theta, std::span<const double> grad, OptimizerState& state,
                    const OptimizerConfig& cfg);

}  // namespace prefco

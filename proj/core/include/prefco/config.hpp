#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prefco/local_search.hpp"
#include "prefco/optimizer.hpp"
#include "prefco/policy.hpp"
#include "prefco/preference.hpp"

namespace prefco {

enum class Algorithm { kPreference, kReinforce };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// Candidate entropy weights searched when alpha is tuned.
inline constexpr std::array<double, 7> kAlphaGrid{0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 2.0};

struct TrainConfig {
    Algorithm algorithm = Algorithm::kPreference;
    PreferenceModel preference{};
    double alpha = 0.05;
    int samples_per_step = 16;
    int steps = 500;
    int finetune_steps = 0;
    LsConfig ls{};
    OptimizerConfig optimizer{};
    std::uint64_t seed = 0;
    HeatmapInit init = HeatmapInit::kZeros;
    double init_scale = 1.0;
    double tie_tol = kDefaultTieTolerance;
    // Reward shaping k * r + b applied before labels/advantages are formed.
    // PO is invariant to it; REINFORCE is not.
    double reward_scale = 1.0;
    double reward_shift = 0.0;
};

/// Names of the keys whose values violate the config invariants. With
/// `from_checkpoint`, steps = 0 is allowed (fine-tune only).
std::vector<std::string> config_problems(const TrainConfig& cfg, bool from_checkpoint = false);

/// Throws invalid-config listing every offending key.
void validate_config(const TrainConfig& cfg, bool from_checkpoint = false);

/// Sets one key from its text value; throws invalid-config on an unknown key or a bad value.
void set_config_key(TrainConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` lines; `#` starts a comment. Unknown keys and unparsable
/// values are all reported together in one invalid-config error.
TrainConfig parse_config(std::string_view text, const TrainConfig& defaults = {}, bool from_checkpoint = false);

/// Inverse of parse_config; doubles are written in shortest round-trip form.
std::string serialize_config(const TrainConfig& cfg);

std::string format_double(double v);

}  // namespace prefco

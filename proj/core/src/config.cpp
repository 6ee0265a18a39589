#include "prefco/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "prefco/error.hpp"

namespace prefco {

std::string_view to_string(Algorithm a) { return a == Algorithm::kPreference ? "po" : "reinforce"; }

Algorithm parse_algorithm(std::string_view name) {
    if (name == "po") return Algorithm::kPreference;
    if (name == "reinforce" || name == "rf") return Algorithm::kReinforce;
    fail(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        fail(ErrorCode::kInvalidConfig, std::string(key));
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail(ErrorCode::kInvalidConfig, std::string(key));
}

template <typename F>
auto parse_enum(std::string_view key, F&& f) {
    try {
        return f();
    } catch (const Error&) {
        fail(ErrorCode::kInvalidConfig, std::string(key));
    }
}

}  // namespace

std::vector<std::string> config_problems(const TrainConfig& cfg, bool from_checkpoint) {
    std::vector<std::string> bad;
    auto check = [&bad](bool ok, const char* key) {
        if (!ok) bad.emplace_back(key);
    };
    check(cfg.alpha > 0.0 && std::isfinite(cfg.alpha), "alpha");
    check(cfg.preference.margin >= 0.0 && std::isfinite(cfg.preference.margin), "margin");
    check(cfg.samples_per_step >= 2, "samples_per_step");
    check(from_checkpoint ? cfg.steps >= 0 : cfg.steps >= 1, "steps");
    check(cfg.finetune_steps >= 0, "finetune_steps");
    check(!from_checkpoint || cfg.steps + cfg.finetune_steps >= 1, "finetune_steps");
    check(cfg.ls.max_iters >= 1, "ls_iters");
    check(cfg.optimizer.learning_rate > 0.0 && std::isfinite(cfg.optimizer.learning_rate), "learning_rate");
    check(cfg.optimizer.beta1 >= 0.0 && cfg.optimizer.beta1 < 1.0, "adam_beta1");
    check(cfg.optimizer.beta2 >= 0.0 && cfg.optimizer.beta2 < 1.0, "adam_beta2");
    check(cfg.optimizer.epsilon > 0.0, "adam_epsilon");
    check(cfg.init == HeatmapInit::kZeros || cfg.init_scale > 0.0, "init_scale");
    check(cfg.tie_tol >= 0.0, "tie_tol");
    check(cfg.reward_scale > 0.0 && std::isfinite(cfg.reward_scale), "reward_scale");
    check(std::isfinite(cfg.reward_shift), "reward_shift");
    return bad;
}

void validate_config(const TrainConfig& cfg, bool from_checkpoint) {
    const auto bad = config_problems(cfg, from_checkpoint);
    if (bad.empty()) return;
    std::string keys;
    for (const auto& k : bad) keys += (keys.empty() ? "" : ", ") + k;
    fail(ErrorCode::kInvalidConfig, "offending keys: " + keys);
}

void set_config_key(TrainConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "algorithm") {
        cfg.algorithm = parse_enum(key, [&] { return parse_algorithm(value); });
    } else if (key == "preference_model") {
        cfg.preference.kind = parse_enum(key, [&] { return parse_preference_kind(value); });
    } else if (key == "alpha") {
        cfg.alpha = parse_number<double>(key, value);
    } else if (key == "margin") {
        cfg.preference.margin = parse_number<double>(key, value);
    } else if (key == "length_control") {
        cfg.preference.length_control = parse_bool(key, value);
    } else if (key == "samples_per_step") {
        cfg.samples_per_step = parse_number<int>(key, value);
    } else if (key == "steps") {
        cfg.steps = parse_number<int>(key, value);
    } else if (key == "finetune_steps") {
        cfg.finetune_steps = parse_number<int>(key, value);
    } else if (key == "ls_iters") {
        cfg.ls.max_iters = parse_number<int>(key, value);
    } else if (key == "ls_strategy") {
        if (value == "first_improvement") {
            cfg.ls.strategy = LsStrategy::kFirstImprovement;
        } else if (value == "best_improvement") {
            cfg.ls.strategy = LsStrategy::kBestImprovement;
        } else {
            fail(ErrorCode::kInvalidConfig, std::string(key));
        }
    } else if (key == "optimizer") {
        cfg.optimizer.kind = parse_enum(key, [&] { return parse_optimizer_kind(value); });
    } else if (key == "learning_rate") {
        cfg.optimizer.learning_rate = parse_number<double>(key, value);
    } else if (key == "adam_beta1") {
        cfg.optimizer.beta1 = parse_number<double>(key, value);
    } else if (key == "adam_beta2") {
        cfg.optimizer.beta2 = parse_number<double>(key, value);
    } else if (key == "adam_epsilon") {
        cfg.optimizer.epsilon = parse_number<double>(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "init") {
        if (value == "zeros") {
            cfg.init = HeatmapInit::kZeros;
        } else if (value == "neg_distance") {
            cfg.init = HeatmapInit::kNegDistance;
        } else {
            fail(ErrorCode::kInvalidConfig, std::string(key));
        }
    } else if (key == "init_scale") {
        cfg.init_scale = parse_number<double>(key, value);
    } else if (key == "tie_tol") {
        cfg.tie_tol = parse_number<double>(key, value);
    } else if (key == "reward_scale") {
        cfg.reward_scale = parse_number<double>(key, value);
    } else if (key == "reward_shift") {
        cfg.reward_shift = parse_number<double>(key, value);
    } else {
        fail(ErrorCode::kInvalidConfig, std::string(key));
    }
}

TrainConfig parse_config(std::string_view text, const TrainConfig& defaults, bool from_checkpoint) {
    TrainConfig cfg = defaults;
    std::vector<std::string> bad;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            bad.emplace_back(line);
            continue;
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            set_config_key(cfg, key, value);
        } catch (const Error&) {
            bad.emplace_back(key);
        }
    }
    for (auto& key : config_problems(cfg, from_checkpoint)) {
        if (std::find(bad.begin(), bad.end(), key) == bad.end()) bad.push_back(std::move(key));
    }
    if (!bad.empty()) {
        std::string keys;
        for (const auto& k : bad) keys += (keys.empty() ? "" : ", ") + k;
        fail(ErrorCode::kInvalidConfig, "offending keys: " + keys);
    }
    return cfg;
}

std::string serialize_config(const TrainConfig& cfg) {
    std::ostringstream out;
    out << "algorithm = " << to_string(cfg.algorithm) << '\n'
        << "preference_model = " << to_string(cfg.preference.kind) << '\n'
        << "alpha = " << format_double(cfg.alpha) << '\n'
        << "margin = " << format_double(cfg.preference.margin) << '\n'
        << "length_control = " << (cfg.preference.length_control ? "true" : "false") << '\n'
        << "samples_per_step = " << cfg.samples_per_step << '\n'
        << "steps = " << cfg.steps << '\n'
        << "finetune_steps = " << cfg.finetune_steps << '\n'
        << "ls_iters = " << cfg.ls.max_iters << '\n'
        << "ls_strategy = "
        << (cfg.ls.strategy == LsStrategy::kFirstImprovement ? "first_improvement" : "best_improvement") << '\n'
        << "optimizer = " << to_string(cfg.optimizer.kind) << '\n'
        << "learning_rate = " << format_double(cfg.optimizer.learning_rate) << '\n'
        << "adam_beta1 = " << format_double(cfg.optimizer.beta1) << '\n'
        << "adam_beta2 = " << format_double(cfg.optimizer.beta2) << '\n'
        << "adam_epsilon = " << format_double(cfg.optimizer.epsilon) << '\n'
        << "seed = " << cfg.seed << '\n'
        << "init = " << (cfg.init == HeatmapInit::kZeros ? "zeros" : "neg_distance") << '\n'
        << "init_scale = " << format_double(cfg.init_scale) << '\n'
        << "tie_tol = " << format_double(cfg.tie_tol) << '\n'
        << "reward_scale = " << format_double(cfg.reward_scale) << '\n'
        << "reward_shift = " << format_double(cfg.reward_shift) << '\n';
    return out.str();
}

}  // namespace prefco

#include "run.hpp"

#include <chrono>
#include <fstream>

#include "io.hpp"
#include "prefco/error.hpp"
#include "prefco/parallel.hpp"

#ifndef PREFCO_VERSION
#define PREFCO_VERSION "unknown"
#endif

namespace prefco::cli {

nlohmann::json read_json(const fs::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

namespace {

struct Layout {
    fs::path root;

    fs::path manifest() const { return root / "manifest.json"; }
    fs::path instances() const { return root / "instances.json"; }
    fs::path summary() const { return root / "summary.json"; }
    fs::path checkpoint(std::size_t i) const { return root / "checkpoints" / (slot_name(i) + ".json"); }
    fs::path metrics(std::size_t i) const { return root / "metrics" / (slot_name(i) + ".csv"); }
    fs::path result(std::size_t i) const { return root / "results" / (slot_name(i) + ".json"); }
    fs::path warm_start(std::size_t i) const { return root / "warm_start" / (slot_name(i) + ".json"); }
};

std::string rel(const fs::path& p, const fs::path& root) { return fs::relative(p, root).generic_string(); }

nlohmann::json instance_ids(const std::vector<Instance>& instances) {
    auto ids = nlohmann::json::array();
    for (const auto& inst : instances) ids.push_back(inst.id());
    return ids;
}

nlohmann::json make_manifest(const RunRequest& req, const Layout& layout, const std::string& status,
                             double wall_seconds) {
    const bool warm = !req.warm_starts.empty();
    nlohmann::json artifacts{{"instances", rel(layout.instances(), layout.root)},
                             {"summary", rel(layout.summary(), layout.root)}};
    auto ckpt = nlohmann::json::array();
    auto metrics = nlohmann::json::array();
    auto results = nlohmann::json::array();
    auto warm_files = nlohmann::json::array();
    for (std::size_t i = 0; i < req.instances.size(); ++i) {
        ckpt.push_back(rel(layout.checkpoint(i), layout.root));
        metrics.push_back(rel(layout.metrics(i), layout.root));
        results.push_back(rel(layout.result(i), layout.root));
        if (warm) warm_files.push_back(rel(layout.warm_start(i), layout.root));
    }
    artifacts["checkpoints"] = ckpt;
    artifacts["metrics"] = metrics;
    artifacts["results"] = results;
    artifacts["warm_starts"] = warm ? warm_files : nlohmann::json(nullptr);
    return {{"tool", "prefco"},
            {"version", PREFCO_VERSION},
            {"command", req.command},
            {"seed", req.config.seed},
            {"seed_rule", "instance i trains with split_seed(seed, training=2, i) and is evaluated with "
                          "split_seed(seed, evaluation=4, i)"},
            {"config", serialize_config(req.config)},
            {"from_checkpoint", warm},
            {"gap_threshold", req.gap_threshold},
            {"instance_ids", instance_ids(req.instances)},
            {"options", req.options},
            {"artifacts", artifacts},
            {"timings", {{"wall_seconds", wall_seconds}, {"jobs", req.jobs}}},
            {"status", status}};
}

bool instance_done(const Layout& layout, std::size_t i) {
    return fs::exists(layout.result(i)) && fs::exists(layout.metrics(i)) && fs::exists(layout.checkpoint(i));
}

}  // namespace

RunRecord execute_run(const RunRequest& req) {
    const bool warm = !req.warm_starts.empty();
    validate_config(req.config, warm);
    if (req.instances.empty()) fail(ErrorCode::kInvalidArgument, "no instances to train on");
    if (warm && req.warm_starts.size() != req.instances.size()) {
        fail(ErrorCode::kInvalidArgument, "need one starting checkpoint per instance");
    }
    for (std::size_t i = 0; warm && i < req.instances.size(); ++i) {
        if (req.warm_starts[i].size() != req.instances[i].size()) {
            fail(ErrorCode::kInvalidArgument, "checkpoint " + std::to_string(i) + " has n=" +
                                                  std::to_string(req.warm_starts[i].size()) + " but instance has n=" +
                                                  std::to_string(req.instances[i].size()));
        }
    }

    const Layout layout{req.out};
    RunRecord record;
    if (req.resume && fs::exists(layout.manifest())) {
        const auto previous = read_json(layout.manifest());
        const bool same = previous.value("config", "") == serialize_config(req.config) &&
                          previous.value("instance_ids", nlohmann::json()) == instance_ids(req.instances) &&
                          previous.value("command", "") == req.command;
        if (!same) fail(ErrorCode::kInvalidConfig, req.out.string() + " holds a different run; refusing to resume");
        if (previous.value("status", "") == "complete") {
            record.skipped = true;
            for (std::size_t i = 0; i < req.instances.size(); ++i) {
                record.summaries.push_back(summary_from_json(read_json(layout.result(i))));
            }
            record.aggregate = aggregate(record.summaries, req.config.steps + req.config.finetune_steps);
            return record;
        }
    }

    const auto started = std::chrono::steady_clock::now();
    for (const char* sub : {"checkpoints", "metrics", "results"}) ensure_directory(layout.root / sub);
    if (warm) ensure_directory(layout.root / "warm_start");
    save_instance_set(layout.instances(), req.instances);
    for (std::size_t i = 0; warm && i < req.instances.size(); ++i) {
        write_file(layout.warm_start(i), policy_to_json(req.warm_starts[i]) + "\n");
    }
    write_json(layout.manifest(), make_manifest(req, layout, "running", 0.0));

    const auto optima = exact_optima(req.instances, req.jobs);
    record.summaries.resize(req.instances.size());
    parallel_for(req.instances.size(), req.jobs, [&](std::size_t i) {
        if (req.resume && instance_done(layout, i)) {
            record.summaries[i] = summary_from_json(read_json(layout.result(i)));
            return;
        }
        const TrainConfig local = config_for_instance(req.config, i);
        const HeatmapPolicy* start = warm ? &req.warm_starts[i] : nullptr;
        const TrainResult run = train_instance(req.instances[i], local, optima[i], start);
        InstanceSummary s = summarize(req.instances[i], run, optima[i], local, i, req.gap_threshold);
        if (warm) {
            const Instance& inst = req.instances[i];
            const double greedy = greedy_decode(*start, inst).length;
            if (optima[i]) s.start_greedy_gap = (greedy - *optima[i]) / *optima[i];
            Rng rng(split_seed(local.seed, SeedStream::kEvaluation, i));
            const auto batch = sample_tours(*start, inst, local.samples_per_step, rng);
            if (const auto c = consistency_metric(*start, inst, batch)) s.start_consistency = c->value;
        }
        write_file(layout.checkpoint(i), policy_to_json(run.policy) + "\n");
        write_file(layout.metrics(i), metrics_to_csv(run.metrics));
        write_json(layout.result(i), to_json(s));
        record.summaries[i] = std::move(s);
    });

    record.aggregate = aggregate(record.summaries, req.config.steps + req.config.finetune_steps);
    auto per_instance = nlohmann::json::array();
    for (const auto& s : record.summaries) per_instance.push_back(to_json(s));
    write_json(layout.summary(), {{"command", req.command},
                                  {"algorithm", to_string(req.config.algorithm)},
                                  {"aggregate", to_json(record.aggregate)},
                                  {"instances", per_instance}});
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_json(layout.manifest(), make_manifest(req, layout, "complete", wall));
    return record;
}

RunRequest request_from_manifest(const fs::path& manifest_path) {
    const auto m = read_json(manifest_path);
    const fs::path root = manifest_path.parent_path();
    RunRequest req;
    try {
        req.command = m.at("command").get<std::string>();
        const bool warm = m.at("from_checkpoint").get<bool>();
        req.config = parse_config(m.at("config").get<std::string>(), {}, warm);
        req.gap_threshold = m.at("gap_threshold").get<double>();
        req.options = m.value("options", nlohmann::json::object());
        const auto& artifacts = m.at("artifacts");
        req.instances = load_instances(root / artifacts.at("instances").get<std::string>());
        if (warm) {
            for (const auto& f : artifacts.at("warm_starts")) {
                req.warm_starts.push_back(policy_from_json(read_file(root / f.get<std::string>())));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParseError, manifest_path.string() + ": " + e.what());
    }
    return req;
}

LoadedRun load_run(const fs::path& run_dir) {
    const fs::path manifest_path = run_dir / "manifest.json";
    const auto m = read_json(manifest_path);
    if (m.value("status", "") != "complete") fail(ErrorCode::kInvalidArgument, run_dir.string() + " is not a finished run");
    RunRequest req = request_from_manifest(manifest_path);
    LoadedRun run;
    run.config = req.config;
    run.instances = std::move(req.instances);
    for (const auto& f : m.at("artifacts").at("checkpoints")) {
        run.checkpoints.push_back(policy_from_json(read_file(run_dir / f.get<std::string>())));
    }
    for (const auto& f : m.at("artifacts").at("metrics")) run.metrics.push_back(run_dir / f.get<std::string>());
    return run;
}

}  // namespace prefco::cli

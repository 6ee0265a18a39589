#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiment.hpp"
#include "prefco/config.hpp"
#include "prefco/instance.hpp"
#include "prefco/policy.hpp"

namespace prefco::cli {

namespace fs = std::filesystem;

/// One training or fine-tuning run over a set of instances, written to `out` as
///   manifest.json  instances.json  summary.json
///   checkpoints/NNNN.json  metrics/NNNN.csv  results/NNNN.json
///   warm_start/NNNN.json   (fine-tune runs only)
struct RunRequest {
    std::string command = "train";
    TrainConfig config;
    std::vector<Instance> instances;
    std::vector<HeatmapPolicy> warm_starts;
    fs::path out;
    int jobs = 1;
    double gap_threshold = kDefaultGapThreshold;
    bool resume = false;
    nlohmann::json options = nlohmann::json::object();  // recorded verbatim
};

struct RunRecord {
    std::vector<InstanceSummary> summaries;
    RunAggregate aggregate;
    bool skipped = false;  // resume found a finished run
};

RunRecord execute_run(const RunRequest& request);

/// Rebuilds the request a manifest was written for; `out` and `jobs` are left for
/// the caller to set.
RunRequest request_from_manifest(const fs::path& manifest_path);

/// A finished run's instances, final checkpoints and config.
struct LoadedRun {
    TrainConfig config;
    std::vector<Instance> instances;
    std::vector<HeatmapPolicy> checkpoints;
    std::vector<fs::path> metrics;
};
LoadedRun load_run(const fs::path& run_dir);

nlohmann::json read_json(const fs::path& path);
void write_json(const fs::path& path, const nlohmann::json& j);

}  // namespace prefco::cli

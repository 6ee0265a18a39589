#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiment.hpp"
#include "io.hpp"
#include "prefco/error.hpp"
#include "prefco/local_search.hpp"
#include "prefco/oracle.hpp"
#include "prefco/parallel.hpp"
#include "run.hpp"

namespace prefco::cli {
namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string out;
};

// Config file, then --set overrides, then flag-derived keys, then --seed. One parse
// reports every unknown, malformed or out-of-range key together.
TrainConfig build_config(const std::string& config_path, const std::vector<std::string>& sets, const Globals& g,
                         const TrainConfig& base = {}, std::vector<std::string> flags = {},
                         bool from_checkpoint = false) {
    std::string text = config_path.empty() ? std::string() : read_file(config_path);
    for (const auto& kv : sets) {
        if (kv.find('=') == std::string::npos) fail(ErrorCode::kInvalidConfig, "--set expects key=value, got " + kv);
        text += "\n" + kv;
    }
    if (g.seed) flags.push_back("seed=" + std::to_string(*g.seed));
    for (const auto& kv : flags) text += "\n" + kv;
    return parse_config(text, base, from_checkpoint);
}

fs::path require_out(const Globals& g) {
    if (g.out.empty()) fail(ErrorCode::kInvalidArgument, "--out is required");
    return g.out;
}

std::vector<Instance> tuning_instances(const std::vector<Instance>& train, const TrainConfig& cfg, int count) {
    return generate_uniform(static_cast<int>(train.front().size()), count,
                            split_seed(cfg.seed, SeedStream::kAlphaTuning, 0));
}

// Grid search over kAlphaGrid on a separately generated tuning set; returns the
// manifest record of the search.
nlohmann::json tune_alpha(TrainConfig& cfg, const std::vector<Instance>& train, int count, int jobs) {
    const auto tune = tuning_instances(train, cfg, count);
    const auto optima = exact_optima(tune, jobs);
    TrainConfig search = cfg;
    search.seed = split_seed(cfg.seed, SeedStream::kAlphaTuning, 1);
    const auto sel = select_alpha(tune, search, optima, kAlphaGrid, jobs);
    cfg.alpha = sel.alpha;
    return {{"grid", kAlphaGrid},
            {"tuning_instances", count},
            {"final_scores", sel.final_scores},
            {"area_scores", sel.area_scores},
            {"selected", sel.alpha}};
}

void print_aggregate(std::ostream& out, const std::string& label, const RunAggregate& a) {
    out << label << ": " << a.instances << " instances";
    if (a.mean_final_gap) out << ", mean final gap " << *a.mean_final_gap * 100.0 << "%";
    if (a.median_iters) out << ", median iters-to-gap " << *a.median_iters;
    if (a.mean_final_consistency) out << ", consistency " << *a.mean_final_consistency;
    out << "\n";
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    int n = 15;
    int count = 30;
};

int cmd_generate(const GenerateArgs& a, const Globals& g, std::ostream& out) {
    const fs::path dir = require_out(g);
    const std::uint64_t seed = g.seed.value_or(0);
    const auto instances = generate_uniform(a.n, a.count, seed);
    ensure_directory(dir);
    auto files = nlohmann::json::array();
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const std::string name = "instance_" + slot_name(k) + ".json";
        write_file(dir / name, instance_to_json(instances[k]) + "\n");
        files.push_back(name);
    }
    write_json(dir / "index.json", {{"tool", "prefco"},
                                    {"version", PREFCO_VERSION},
                                    {"command", "generate"},
                                    {"n", a.n},
                                    {"count", a.count},
                                    {"seed", seed},
                                    {"seed_rule", "instance k uses split_seed(seed, instance=1, k)"},
                                    {"files", files}});
    out << "wrote " << instances.size() << " instances to " << dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string config;
    std::vector<std::string> sets;
    std::string instances;
    std::string algorithm;
    std::string from_manifest;
    bool resume = false;
    bool tune = false;
    int tune_count = 10;
    double gap_threshold = kDefaultGapThreshold;
};

int cmd_train(const TrainArgs& a, const Globals& g, std::ostream& out) {
    RunRequest req;
    if (!a.from_manifest.empty()) {
        req = request_from_manifest(a.from_manifest);
        if (req.command != "train") fail(ErrorCode::kInvalidArgument, "manifest is for '" + req.command + "', not train");
    } else {
        if (a.instances.empty()) fail(ErrorCode::kInvalidArgument, "--instances is required");
        std::vector<std::string> flags;
        if (!a.algorithm.empty()) flags.push_back("algorithm=" + a.algorithm);
        req.config = build_config(a.config, a.sets, g, {}, flags);
        req.instances = load_instances(a.instances);
        req.gap_threshold = a.gap_threshold;
        if (a.tune) {
            if (req.config.algorithm != Algorithm::kPreference) {
                fail(ErrorCode::kInvalidArgument, "--tune-alpha only applies to the preference algorithm");
            }
            req.options["alpha_search"] = tune_alpha(req.config, req.instances, a.tune_count, g.jobs);
        }
    }
    req.out = require_out(g);
    req.jobs = g.jobs;
    req.resume = a.resume;
    const auto record = execute_run(req);
    if (record.skipped) {
        out << "run in " << req.out.string() << " is already complete\n";
        return kExitOk;
    }
    print_aggregate(out, to_string(req.config.algorithm).data(), record.aggregate);
    return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
    std::string config_a;
    std::string config_b;
    std::vector<std::string> sets_a;
    std::vector<std::string> sets_b;
    std::string instances;
    std::string instances_b;
    std::string from_manifest;
    bool tune = false;
    int tune_count = 10;
    double gap_threshold = kDefaultGapThreshold;
};

nlohmann::json comparison(const RunRecord& a, const RunRecord& b, const TrainConfig& ca, const TrainConfig& cb) {
    const int ta = ca.steps + ca.finetune_steps;
    const int tb = cb.steps + cb.finetune_steps;
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < a.summaries.size(); ++i) {
        const auto& sa = a.summaries[i];
        const auto& sb = b.summaries[i];
        nlohmann::json row{{"id", sa.id},
                           {"iters_a", sa.iters_to_gap ? nlohmann::json(*sa.iters_to_gap) : nlohmann::json(nullptr)},
                           {"iters_b", sb.iters_to_gap ? nlohmann::json(*sb.iters_to_gap) : nlohmann::json(nullptr)},
                           {"iters_delta", censored_iters(sb, tb) - censored_iters(sa, ta)},
                           {"final_gap_a", sa.final_gap ? nlohmann::json(*sa.final_gap) : nlohmann::json(nullptr)},
                           {"final_gap_b", sb.final_gap ? nlohmann::json(*sb.final_gap) : nlohmann::json(nullptr)},
                           {"early_entropy_a", sa.early_entropy},
                           {"early_entropy_b", sb.early_entropy}};
        if (sa.final_gap && sb.final_gap) row["final_gap_delta"] = *sb.final_gap - *sa.final_gap;
        rows.push_back(row);
    }
    nlohmann::json out{{"a", to_json(a.aggregate)}, {"b", to_json(b.aggregate)}, {"per_instance", rows}};
    if (a.aggregate.median_iters && b.aggregate.median_iters) {
        out["speedup_b_over_a"] = *b.aggregate.median_iters / *a.aggregate.median_iters;
    } else {
        out["speedup_b_over_a"] = nullptr;
    }
    out["censoring"] = "instances that never reach the threshold count as total steps + 1";
    return out;
}

int cmd_compare(const CompareArgs& a, const Globals& g, std::ostream& out) {
    const fs::path dir = require_out(g);
    RunRequest ra;
    RunRequest rb;
    nlohmann::json options = nlohmann::json::object();
    if (!a.from_manifest.empty()) {
        const fs::path manifest(a.from_manifest);
        const auto m = read_json(manifest);
        if (m.value("command", "") != "compare") fail(ErrorCode::kInvalidArgument, "manifest is not a compare run");
        ra = request_from_manifest(manifest.parent_path() / m.at("runs").at("a").get<std::string>());
        rb = request_from_manifest(manifest.parent_path() / m.at("runs").at("b").get<std::string>());
        options = m.value("options", nlohmann::json::object());
    } else {
        if (a.instances.empty()) fail(ErrorCode::kInvalidArgument, "--instances is required");
        ra.instances = load_instances(a.instances);
        rb.instances = a.instances_b.empty() ? ra.instances : load_instances(a.instances_b);
        bool same = ra.instances.size() == rb.instances.size();
        for (std::size_t i = 0; same && i < ra.instances.size(); ++i) {
            same = ra.instances[i].id() == rb.instances[i].id() &&
                   std::equal(ra.instances[i].coords().begin(), ra.instances[i].coords().end(),
                              rb.instances[i].coords().begin(), rb.instances[i].coords().end());
        }
        if (!same) fail(ErrorCode::kInvalidArgument, "the two sides must use the same instance set");
        TrainConfig rf_default;
        rf_default.algorithm = Algorithm::kReinforce;
        ra.config = build_config(a.config_a, a.sets_a, g);
        rb.config = build_config(a.config_b, a.sets_b, g, a.config_b.empty() ? rf_default : TrainConfig{});
        if (ra.config.seed != rb.config.seed) fail(ErrorCode::kInvalidConfig, "offending keys: seed (sides differ)");
        ra.gap_threshold = rb.gap_threshold = a.gap_threshold;
        if (a.tune) {
            for (auto* r : {&ra, &rb}) {
                if (r->config.algorithm == Algorithm::kPreference) {
                    r->options["alpha_search"] = tune_alpha(r->config, r->instances, a.tune_count, g.jobs);
                }
            }
        }
        options["gap_threshold"] = a.gap_threshold;
    }
    ra.command = rb.command = "train";
    ra.out = dir / "a";
    rb.out = dir / "b";
    ra.jobs = rb.jobs = g.jobs;
    ensure_directory(dir);
    const auto rec_a = execute_run(ra);
    const auto rec_b = execute_run(rb);
    const auto summary = comparison(rec_a, rec_b, ra.config, rb.config);
    write_json(dir / "summary.json", summary);
    write_json(dir / "manifest.json", {{"tool", "prefco"},
                                       {"version", PREFCO_VERSION},
                                       {"command", "compare"},
                                       {"seed", ra.config.seed},
                                       {"runs", {{"a", "a/manifest.json"}, {"b", "b/manifest.json"}}},
                                       {"options", options},
                                       {"artifacts", {{"summary", "summary.json"}}},
                                       {"status", "complete"}});
    print_aggregate(out, std::string("a (") + to_string(ra.config.algorithm).data() + ")", rec_a.aggregate);
    print_aggregate(out, std::string("b (") + to_string(rb.config.algorithm).data() + ")", rec_b.aggregate);
    if (!summary["speedup_b_over_a"].is_null()) {
        out << "speedup (median iters b / a): " << summary["speedup_b_over_a"].get<double>() << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- finetune

struct FinetuneArgs {
    std::string run;
    std::string from_manifest;
    std::vector<std::string> sets;
    int steps = 50;
    int ls_iters = 20;
    bool resume = false;
};

int cmd_finetune(const FinetuneArgs& a, const Globals& g, std::ostream& out) {
    RunRequest req;
    if (!a.from_manifest.empty()) {
        req = request_from_manifest(a.from_manifest);
        if (req.command != "finetune") fail(ErrorCode::kInvalidArgument, "manifest is not a finetune run");
    } else {
        if (a.run.empty()) fail(ErrorCode::kInvalidArgument, "--run is required");
        LoadedRun base = load_run(a.run);
        const TrainConfig cfg = build_config("", a.sets, g, base.config,
                                             {"steps=0", "finetune_steps=" + std::to_string(a.steps),
                                              "ls_iters=" + std::to_string(a.ls_iters)},
                                             true);
        req.command = "finetune";
        req.config = cfg;
        req.instances = std::move(base.instances);
        req.warm_starts = std::move(base.checkpoints);
        req.options["source_run"] = fs::absolute(a.run).lexically_normal().string();
    }
    req.out = require_out(g);
    req.jobs = g.jobs;
    req.resume = a.resume;
    const auto record = execute_run(req);
    if (record.skipped) {
        out << "run in " << req.out.string() << " is already complete\n";
        return kExitOk;
    }
    std::size_t better = 0;
    std::size_t worse = 0;
    for (const auto& s : record.summaries) {
        if (!s.greedy_gap || !s.start_greedy_gap) continue;
        if (*s.greedy_gap < *s.start_greedy_gap) ++better;
        if (*s.greedy_gap > *s.start_greedy_gap + 1e-9) ++worse;
    }
    print_aggregate(out, "finetune", record.aggregate);
    out << "greedy gap improved on " << better << ", worsened on " << worse << " of " << record.summaries.size()
        << " instances\n";
    return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string checkpoint;
    std::string instances;
    std::string decode = "greedy";
    int k = 64;
};

int cmd_evaluate(const EvaluateArgs& a, const Globals& g, std::ostream& out) {
    if (a.checkpoint.empty()) fail(ErrorCode::kInvalidArgument, "--checkpoint is required");
    if (a.decode != "greedy" && a.decode != "sample_best_k") {
        fail(ErrorCode::kInvalidArgument, "--decode must be greedy or sample_best_k");
    }
    if (a.decode == "sample_best_k" && a.k < 1) fail(ErrorCode::kInvalidArgument, "--k must be >= 1");
    std::vector<Instance> instances;
    std::vector<HeatmapPolicy> policies;
    if (fs::is_directory(a.checkpoint)) {
        LoadedRun run = load_run(a.checkpoint);
        instances = a.instances.empty() ? std::move(run.instances) : load_instances(a.instances);
        policies = std::move(run.checkpoints);
        if (policies.size() != instances.size()) {
            fail(ErrorCode::kInvalidArgument, "run has " + std::to_string(policies.size()) + " checkpoints for " +
                                                  std::to_string(instances.size()) + " instances");
        }
    } else {
        if (a.instances.empty()) fail(ErrorCode::kInvalidArgument, "--instances is required with a checkpoint file");
        instances = load_instances(a.instances);
        policies.assign(instances.size(), policy_from_json(read_file(a.checkpoint)));
    }
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (policies[i].size() != instances[i].size()) {
            fail(ErrorCode::kInvalidArgument, "checkpoint has n=" + std::to_string(policies[i].size()) +
                                                  " but instance " + instances[i].id() + " has n=" +
                                                  std::to_string(instances[i].size()));
        }
    }

    const std::uint64_t seed = g.seed.value_or(0);
    std::vector<nlohmann::json> rows(instances.size());
    std::vector<double> gaps(instances.size());
    parallel_for(instances.size(), g.jobs, [&](std::size_t i) {
        const Instance& inst = instances[i];
        Tour tour = greedy_decode(policies[i], inst);
        if (a.decode == "sample_best_k") {
            Rng rng(split_seed(seed, SeedStream::kEvaluation, i));
            const auto batch = sample_tours(policies[i], inst, std::max(a.k, 2), rng);
            tour = batch.tours.front();
            for (std::size_t j = 0; j < static_cast<std::size_t>(a.k); ++j) {
                if (batch.tours[j].length < tour.length) tour = batch.tours[j];
            }
        }
        Reference ref;
        if (inst.size() <= kDefaultHeldKarpNodes) {
            ref = {solve_held_karp(inst).best_length, true};
        } else {
            Rng ls_rng(split_seed(seed, SeedStream::kLocalSearch, i));
            const auto start = greedy_decode(HeatmapPolicy(inst.size()), inst);
            ref = {two_opt(inst, start, LsConfig{kUnlimitedMoves, LsStrategy::kBestImprovement}, ls_rng).length, false};
        }
        gaps[i] = (tour.length - ref.length) / ref.length;
        rows[i] = {{"id", inst.id()},
                   {"length", tour.length},
                   {"reference_length", ref.length},
                   {"reference_exact", ref.exact},
                   {"gap", gaps[i]},
                   {"tour", tour.perm}};
    });
    double mean = 0.0;
    bool all_exact = true;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        mean += gaps[i] / static_cast<double>(gaps.size());
        all_exact = all_exact && rows[i]["reference_exact"].get<bool>();
    }
    nlohmann::json report{{"decode", a.decode},
                          {"k", a.decode == "sample_best_k" ? nlohmann::json(a.k) : nlohmann::json(nullptr)},
                          {"seed", seed},
                          {"mean_gap", mean},
                          {"reference", all_exact ? "held_karp" : "two_opt (upper bound; gaps are not exact)"},
                          {"instances", rows}};
    if (g.out.empty()) {
        out << report.dump(2) << "\n";
    } else {
        ensure_directory(g.out);
        write_json(fs::path(g.out) / "evaluation.json", report);
        out << "mean gap " << mean * 100.0 << "% over " << rows.size() << " instances\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string run;
    int samples = 0;
};

int cmd_analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out) {
    if (a.run.empty()) fail(ErrorCode::kInvalidArgument, "--run is required");
    const fs::path dir = require_out(g);
    const LoadedRun run = load_run(a.run);
    const std::uint64_t seed = g.seed.value_or(run.config.seed);
    const int samples = a.samples > 0 ? a.samples : run.config.samples_per_step;

    TrainConfig po = run.config;
    po.algorithm = Algorithm::kPreference;
    TrainConfig rf = run.config;
    rf.algorithm = Algorithm::kReinforce;

    std::ostringstream adv;
    adv << "instance,algorithm,rank,length,advantage\n";
    for (std::size_t i = 0; i < run.instances.size(); ++i) {
        Rng rng(split_seed(seed, SeedStream::kEvaluation, i));
        const auto batch = sample_tours(run.checkpoints[i], run.instances[i], std::max(samples, 2), rng);
        for (const auto* cfg : {&po, &rf}) {
            const auto report = advantage_report(batch, *cfg);
            for (std::size_t r = 0; r < report.size(); ++r) {
                adv << run.instances[i].id() << ',' << to_string(cfg->algorithm) << ',' << r << ','
                    << format_double(report[r].length) << ',' << format_double(report[r].advantage) << '\n';
            }
        }
    }

    // Step-wise means across instances of the recorded entropy and consistency.
    std::vector<double> entropy_sum;
    std::vector<double> cons_sum;
    std::vector<int> cons_count;
    std::vector<int> entropy_count;
    for (const auto& path : run.metrics) {
        std::istringstream in(read_file(path));
        std::string line;
        std::getline(in, line);
        std::size_t row = 0;
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            while (cells.size() < 7) cells.emplace_back();
            if (entropy_sum.size() <= row) {
                entropy_sum.resize(row + 1, 0.0);
                entropy_count.resize(row + 1, 0);
                cons_sum.resize(row + 1, 0.0);
                cons_count.resize(row + 1, 0);
            }
            entropy_sum[row] += std::stod(cells[4]);
            ++entropy_count[row];
            if (!cells[5].empty()) {
                cons_sum[row] += std::stod(cells[5]);
                ++cons_count[row];
            }
            ++row;
        }
    }
    std::ostringstream curves;
    curves << "step,mean_entropy,mean_consistency,consistency_instances\n";
    for (std::size_t s = 0; s < entropy_sum.size(); ++s) {
        curves << s + 1 << ',' << format_double(entropy_sum[s] / entropy_count[s]) << ','
               << (cons_count[s] > 0 ? format_double(cons_sum[s] / cons_count[s]) : "") << ',' << cons_count[s]
               << '\n';
    }

    ensure_directory(dir);
    write_file(dir / "advantages.csv", adv.str());
    write_file(dir / "curves.csv", curves.str());
    write_json(dir / "manifest.json", {{"tool", "prefco"},
                                       {"version", PREFCO_VERSION},
                                       {"command", "analyze"},
                                       {"source_run", fs::absolute(a.run).lexically_normal().string()},
                                       {"seed", seed},
                                       {"samples", samples},
                                       {"artifacts", {{"advantages", "advantages.csv"}, {"curves", "curves.csv"}}},
                                       {"status", "complete"}});
    out << "wrote advantages.csv and curves.csv to " << dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Preference optimization and REINFORCE for per-instance TSP heatmap policies", "prefco"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", PREFCO_VERSION);

    Globals g;
    app.add_option("--seed", g.seed, "Root seed; every other seed is split from it");
    app.add_option("--jobs", g.jobs, "Parallel per-instance jobs (never changes results)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output directory");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write uniform random instances plus index.json");
    generate->add_option("--n", gen.n, "Nodes per instance")->required();
    generate->add_option("--count", gen.count, "Number of instances")->required();

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "Train one heatmap per instance");
    train->add_option("--config", tr.config, "Flat key = value config file");
    train->add_option("--set", tr.sets, "Config override key=value (repeatable)");
    train->add_option("--instances", tr.instances, "Instance directory, index, JSON or .tsp file");
    train->add_option("--algorithm", tr.algorithm, "po or reinforce (overrides the config)");
    train->add_flag("--resume", tr.resume, "Skip work already finished in --out");
    train->add_option("--from-manifest", tr.from_manifest, "Re-run exactly what a manifest describes");
    train->add_flag("--tune-alpha", tr.tune, "Grid-search alpha on a generated tuning set first");
    train->add_option("--tune-count", tr.tune_count, "Tuning instances for --tune-alpha")->check(CLI::PositiveNumber);
    train->add_option("--gap-threshold", tr.gap_threshold, "Gap for iterations-to-gap");

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "Paired runs of two configs on the same instances");
    compare->add_option("--config-a", cmp.config_a, "Config for side a (default: preference optimization)");
    compare->add_option("--config-b", cmp.config_b, "Config for side b (default: REINFORCE)");
    compare->add_option("--set-a", cmp.sets_a, "Override for side a (repeatable)");
    compare->add_option("--set-b", cmp.sets_b, "Override for side b (repeatable)");
    compare->add_option("--instances", cmp.instances, "Instance set");
    compare->add_option("--instances-b", cmp.instances_b, "Instance set for side b; must match --instances");
    compare->add_option("--from-manifest", cmp.from_manifest, "Re-run a previous comparison");
    compare->add_flag("--tune-alpha", cmp.tune, "Grid-search alpha for preference sides");
    compare->add_option("--tune-count", cmp.tune_count, "Tuning instances for --tune-alpha")->check(CLI::PositiveNumber);
    compare->add_option("--gap-threshold", cmp.gap_threshold, "Gap for iterations-to-gap");

    FinetuneArgs ft;
    auto* finetune = app.add_subcommand("finetune", "Local-search fine-tuning from a finished train run");
    finetune->add_option("--run", ft.run, "Directory of a finished train run");
    finetune->add_option("--from-manifest", ft.from_manifest, "Re-run a previous fine-tune");
    finetune->add_option("--steps", ft.steps, "Fine-tune steps")->check(CLI::PositiveNumber);
    finetune->add_option("--ls-iters", ft.ls_iters, "Accepted 2-opt moves per tour")->check(CLI::PositiveNumber);
    finetune->add_option("--set", ft.sets, "Config override key=value (repeatable)");
    finetune->add_flag("--resume", ft.resume, "Skip work already finished in --out");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Gap report for checkpoints");
    evaluate->add_option("--checkpoint", ev.checkpoint, "Checkpoint file or finished run directory");
    evaluate->add_option("--instances", ev.instances, "Instances (default: the run's own)");
    evaluate->add_option("--decode", ev.decode, "greedy or sample_best_k");
    evaluate->add_option("--k", ev.k, "Samples for sample_best_k");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Export advantage and entropy/consistency CSVs from a run");
    analyze->add_option("--run", an.run, "Directory of a finished train run");
    analyze->add_option("--samples", an.samples, "Tours per instance (default: samples_per_step)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << PREFCO_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run 'prefco --help' for usage\n";
        return kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(gen, g, out);
        if (*train) return cmd_train(tr, g, out);
        if (*compare) return cmd_compare(cmp, g, out);
        if (*finetune) return cmd_finetune(ft, g, out);
        if (*evaluate) return cmd_evaluate(ev, g, out);
        if (*analyze) return cmd_analyze(an, g, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return e.code() == ErrorCode::kIo ? kExitIo : kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error (io): " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace prefco::cli

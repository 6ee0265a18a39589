// Acceptance checks. Prints one "criterion K: PASS|FAIL ..." line per requested
// criterion and exits nonzero if any of them fails.
//
//   prefco_acceptance [--jobs J] [--workdir DIR] [K ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "io.hpp"
#include "prefco/config.hpp"
#include "prefco/local_search.hpp"
#include "prefco/oracle.hpp"
#include "prefco/parallel.hpp"
#include "prefco/policy.hpp"
#include "prefco/preference.hpp"
#include "prefco/reinforce.hpp"
#include "prefco/rng.hpp"
#include "prefco/trainer.hpp"

namespace fs = std::filesystem;
using namespace prefco;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

int g_jobs = 1;
fs::path g_workdir;

// ------------------------------------------------------------------ helpers

Permutation random_perm(std::size_t n, Rng& rng) {
    Permutation perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    shuffle(perm.data() + 1, n - 1, rng);
    return perm;
}

HeatmapPolicy random_policy(std::size_t n, Rng& rng) {
    HeatmapPolicy policy(n);
    for (double& v : policy.theta().data()) v = 2.0 * (2.0 * uniform01(rng) - 1.0);
    return policy;
}

std::vector<double> uniform_vector(std::size_t n, Rng& rng, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * uniform01(rng);
    return v;
}

SampleBatch score_batch(const HeatmapPolicy& policy, const Instance& inst, const std::vector<Permutation>& perms) {
    SampleBatch batch;
    for (const auto& p : perms) {
        auto s = score_tour(policy, inst, p);
        batch.append(make_tour(inst, p), s.log_prob, std::move(s.step_entropies));
    }
    return batch;
}

SampleBatch synthetic_batch(const std::vector<double>& log_probs, const std::vector<double>& rewards) {
    SampleBatch batch;
    for (std::size_t i = 0; i < log_probs.size(); ++i) {
        Tour t;
        t.length = -rewards[i];
        t.reward = rewards[i];
        batch.append(std::move(t), log_probs[i], std::vector<double>(5, 0.0));
    }
    return batch;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ------------------------------------------------------------------ 1

// Norm-wise relative error max|a - n| / max(max|a|, max|n|) per gradient matrix.
// Entries that are structurally zero carry only finite-difference roundoff
// (about eps * |loss| / h), so the entrywise figure is reported alongside but does
// not decide the verdict.
Verdict gradient_fidelity() {
    Rng rng(101);
    double worst = 0.0;
    double worst_entrywise = 0.0;
    std::string worst_label;
    int checks = 0;
    for (int c = 0; c < 20; ++c) {
        const auto inst = generate_uniform(6, 1, split_seed(101, SeedStream::kInstance, c)).front();
        const auto policy = random_policy(6, rng);
        std::vector<Permutation> perms;
        for (int i = 0; i < 4; ++i) perms.push_back(random_perm(6, rng));

        std::vector<TrainConfig> cfgs;
        for (auto kind : {PreferenceKind::kBradleyTerry, PreferenceKind::kThurstone, PreferenceKind::kPlackettLuce,
                          PreferenceKind::kExponential}) {
            TrainConfig cfg;
            cfg.preference.kind = kind;
            cfg.alpha = kAlphaGrid[static_cast<std::size_t>(c) % kAlphaGrid.size()];
            if (kind != PreferenceKind::kPlackettLuce) cfg.preference.margin = (c % 2) * 0.1;
            cfg.preference.length_control = c % 3 == 0;
            cfgs.push_back(cfg);
        }
        TrainConfig rf;
        rf.algorithm = Algorithm::kReinforce;
        cfgs.push_back(rf);

        for (const auto& cfg : cfgs) {
            const auto res = batch_objective(score_batch(policy, inst, perms), cfg);
            Matrix analytic(6, 6, 0.0);
            for (std::size_t j = 0; j < perms.size(); ++j) {
                accumulate_grad_log_prob(policy, perms[j], -res.advantages[j] / 4.0, analytic);
            }
            Matrix numeric(6, 6, 0.0);
            HeatmapPolicy probe = policy;
            const double h = 1e-5;
            for (std::size_t i = 0; i < 6; ++i) {
                for (std::size_t j = 0; j < 6; ++j) {
                    const double saved = probe.theta()(i, j);
                    probe.theta()(i, j) = saved + h;
                    const double up = batch_objective(score_batch(probe, inst, perms), cfg).loss;
                    probe.theta()(i, j) = saved - h;
                    const double down = batch_objective(score_batch(probe, inst, perms), cfg).loss;
                    probe.theta()(i, j) = saved;
                    numeric(i, j) = (up - down) / (2.0 * h);
                }
            }
            double diff = 0.0;
            double scale = 0.0;
            for (std::size_t k = 0; k < 36; ++k) {
                const double a = analytic.data()[k];
                const double n = numeric.data()[k];
                diff = std::max(diff, std::abs(a - n));
                scale = std::max({scale, std::abs(a), std::abs(n)});
                worst_entrywise =
                    std::max(worst_entrywise, std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6}));
            }
            const double err = scale > 0.0 ? diff / scale : diff;
            if (err > worst) {
                worst = err;
                worst_label = cfg.algorithm == Algorithm::kReinforce ? std::string("reinforce")
                                                                     : std::string(to_string(cfg.preference.kind));
            }
            ++checks;
        }
    }
    return {worst <= 1e-4, std::to_string(checks) + " gradients, max relative error " + fmt("%.3g", worst) + " (" +
                               worst_label + "), limit 1e-4; entrywise with 1e-6 floor " +
                               fmt("%.3g", worst_entrywise)};
}

// ------------------------------------------------------------------ 2

Verdict oracle_equivalence() {
    const auto instances = generate_uniform(8, 50, 202);
    int equal = 0;
    for (const auto& inst : instances) {
        const auto hk = solve_held_karp(inst);
        const auto ex = solve_exhaustive(inst);
        if (hk.best_length == ex.best_length && hk.best_perm == ex.best_perm) ++equal;
    }
    return {equal == 50, std::to_string(equal) + "/50 n=8 instances with bit-equal length and tour"};
}

// ------------------------------------------------------------------ 3

TrainConfig short_run(Algorithm algorithm, PreferenceKind kind) {
    TrainConfig cfg;
    cfg.algorithm = algorithm;
    cfg.preference.kind = kind;
    cfg.steps = 60;
    cfg.samples_per_step = 8;
    cfg.init = HeatmapInit::kNegDistance;
    cfg.init_scale = 6.0;
    cfg.seed = 303;
    return cfg;
}

bool same_trajectory(const TrainResult& a, const TrainResult& b) {
    if (!(a.policy.theta() == b.policy.theta()) || a.metrics.size() != b.metrics.size()) return false;
    for (std::size_t s = 0; s < a.metrics.size(); ++s) {
        if (a.metrics[s].advantages != b.metrics[s].advantages || a.metrics[s].loss != b.metrics[s].loss ||
            a.metrics[s].mean_reward != b.metrics[s].mean_reward) {
            return false;
        }
    }
    return true;
}

Verdict affine_invariance() {
    const std::vector<PreferenceKind> kinds{PreferenceKind::kBradleyTerry, PreferenceKind::kThurstone,
                                            PreferenceKind::kPlackettLuce, PreferenceKind::kExponential};
    Rng rng(303);

    // (a) batch level: labels, losses and advantages under r - h(x).
    int batch_ok = 0;
    int batch_total = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto lp = uniform_vector(16, rng, -30, -5);
        const auto r = uniform_vector(16, rng, -10, -4);
        auto shifted = r;
        const double h = 5.0 * uniform01(rng);
        for (double& v : shifted) v -= h;
        const auto la = make_labels(r);
        const auto lb = make_labels(shifted);
        for (auto kind : kinds) {
            const PreferenceModel model{kind};
            const auto a = po_loss(model, 0.05, synthetic_batch(lp, r), la);
            const auto b = po_loss(model, 0.05, synthetic_batch(lp, shifted), lb);
            batch_ok += la == lb && a.loss == b.loss && a.advantages == b.advantages;
            ++batch_total;
        }
    }

    // (a) trajectory level and (b) PO under scaling by 3.
    const auto inst = generate_uniform(10, 1, 303).front();
    int shift_ok = 0;
    int scale_ok = 0;
    for (auto kind : kinds) {
        const auto cfg = short_run(Algorithm::kPreference, kind);
        auto shifted = cfg;
        shifted.reward_shift = -7.25;
        auto scaled = cfg;
        scaled.reward_scale = 3.0;
        const auto base = train_instance(inst, cfg);
        shift_ok += same_trajectory(base, train_instance(inst, shifted));
        scale_ok += same_trajectory(base, train_instance(inst, scaled));
    }

    // (b) REINFORCE advantages under scaling by 3. Multiplying by 3 is not exact in
    // binary floating point, so A(3r) and 3 A(r) are compared to a few ulps of the
    // reward magnitude; the power-of-two factor 2 is compared bit for bit.
    double worst_x3 = 0.0;
    int x2_exact = 0;
    const int rf_trials = 1000;
    for (int trial = 0; trial < rf_trials; ++trial) {
        const auto r = uniform_vector(16, rng, -12, -4);
        const std::vector<double> lp(16, -3.0);
        auto r2 = r;
        auto r3 = r;
        for (double& v : r2) v *= 2.0;
        for (double& v : r3) v *= 3.0;
        const auto a1 = reinforce_advantages(synthetic_batch(lp, r)).advantages;
        const auto a2 = reinforce_advantages(synthetic_batch(lp, r2)).advantages;
        const auto a3 = reinforce_advantages(synthetic_batch(lp, r3)).advantages;
        bool exact = true;
        for (std::size_t i = 0; i < 16; ++i) {
            exact = exact && a2[i] == 2.0 * a1[i];
            worst_x3 = std::max(worst_x3, std::abs(a3[i] - 3.0 * a1[i]) / (3.0 * 12.0));
        }
        x2_exact += exact;
    }
    const auto rf_cfg = short_run(Algorithm::kReinforce, PreferenceKind::kBradleyTerry);
    auto rf_scaled = rf_cfg;
    rf_scaled.reward_scale = 3.0;
    const bool rf_changes = !same_trajectory(train_instance(inst, rf_cfg), train_instance(inst, rf_scaled));

    const bool pass = batch_ok == batch_total && shift_ok == 4 && scale_ok == 4 && worst_x3 <= 1e-15 &&
                      x2_exact == rf_trials && rf_changes;
    std::ostringstream d;
    d << "shift: " << batch_ok << '/' << batch_total << " batches, " << shift_ok
      << "/4 trajectories bit-identical; x3: " << scale_ok << "/4 PO trajectories bit-identical, REINFORCE "
      << (rf_changes ? "changes" : "unchanged") << ", A(3r) vs 3A(r) max error " << fmt("%.2g", worst_x3)
      << " of |r| (limit 1e-15), A(2r) == 2A(r) bitwise in " << x2_exact << '/' << rf_trials;
    return {pass, d.str()};
}

// ------------------------------------------------------------------ 4

Verdict exponential_mean_form() {
    Rng rng(404);
    const PreferenceModel exp_model{PreferenceKind::kExponential};
    double worst = 0.0;
    int exact = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 31);
        const auto lp = uniform_vector(n, rng, -30, -1);
        const auto r = uniform_vector(n, rng, -10, -4);
        const double alpha = kAlphaGrid[uniform_index(rng, kAlphaGrid.size())];
        const auto labels = make_labels(r);
        const auto res = po_loss_pairwise(exp_model, alpha, synthetic_batch(lp, r), labels);
        double listing = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                listing += labels.at(j, k) ? -alpha * (lp[j] - lp[k]) : 0.0;
            }
        }
        listing /= static_cast<double>(n * n);
        worst = std::max(worst, std::abs(res.loss - listing));
        bool all = true;
        for (std::size_t j = 0; j < n; ++j) {
            const double net = static_cast<double>(labels.wins(j)) - static_cast<double>(labels.losses(j));
            all = all && res.advantages[j] == alpha * net / static_cast<double>(n);
        }
        exact += all;
    }
    return {worst <= 1e-12 && exact == 100, "max |loss - mean-over-pairs| " + fmt("%.3g", worst) +
                                                " (limit 1e-12); advantages exact on " + std::to_string(exact) +
                                                "/100 batches"};
}

// ------------------------------------------------------------------ 5-8

// 30 uniform TSP-15 instances, N=16, T=500, Adam 1e-2, BT with alpha from a grid
// search on 10 separate tuning instances; REINFORCE under the same budget.
struct DeskScale {
    static constexpr std::uint64_t kRoot = 2024;
    static constexpr int kCount = 30;
    static constexpr int kNodes = 15;
    static constexpr double kThreshold = 0.01;

    std::vector<Instance> instances;
    std::vector<std::optional<double>> optima;
    TrainConfig po_cfg;
    TrainConfig rf_cfg;
    AlphaSelection selection;
    std::vector<TrainResult> po;
    std::vector<TrainResult> rf;
    std::vector<TrainResult> finetuned;
    double seconds_main = 0.0;
    double seconds_tuning = 0.0;
};

std::vector<std::optional<double>> held_karp_all(const std::vector<Instance>& instances) {
    std::vector<std::optional<double>> out(instances.size());
    parallel_for(instances.size(), g_jobs,
                 [&](std::size_t i) { out[i] = solve_held_karp(instances[i]).best_length; });
    return out;
}

const DeskScale& desk_scale() {
    static const DeskScale ds = [] {
        DeskScale d;
        d.instances = generate_uniform(DeskScale::kNodes, DeskScale::kCount, DeskScale::kRoot);
        d.optima = held_karp_all(d.instances);

        TrainConfig cfg;
        cfg.seed = DeskScale::kRoot;
        cfg.samples_per_step = 16;
        cfg.steps = 500;
        cfg.optimizer.kind = OptimizerKind::kAdam;
        cfg.optimizer.learning_rate = 1e-2;
        cfg.init = HeatmapInit::kNegDistance;
        cfg.init_scale = 6.0;
        cfg.preference.kind = PreferenceKind::kBradleyTerry;

        const auto t0 = std::chrono::steady_clock::now();
        const auto tuning = generate_uniform(DeskScale::kNodes, 10,
                                             split_seed(DeskScale::kRoot, SeedStream::kAlphaTuning, 0));
        TrainConfig search = cfg;
        search.seed = split_seed(DeskScale::kRoot, SeedStream::kAlphaTuning, 1);
        d.selection = select_alpha(tuning, search, held_karp_all(tuning), kAlphaGrid, g_jobs);
        const auto t1 = std::chrono::steady_clock::now();

        d.po_cfg = cfg;
        d.po_cfg.alpha = d.selection.alpha;
        d.rf_cfg = cfg;
        d.rf_cfg.algorithm = Algorithm::kReinforce;
        d.po = train_many(d.instances, d.po_cfg, d.optima, {}, g_jobs);
        d.rf = train_many(d.instances, d.rf_cfg, d.optima, {}, g_jobs);
        const auto t2 = std::chrono::steady_clock::now();

        std::vector<HeatmapPolicy> warm;
        for (const auto& r : d.po) warm.push_back(r.policy);
        TrainConfig ft = d.po_cfg;
        ft.seed = split_seed(DeskScale::kRoot, SeedStream::kTraining, 1'000'000);
        ft.steps = 0;
        ft.finetune_steps = 50;
        ft.ls.max_iters = 20;
        d.finetuned = train_many(d.instances, ft, d.optima, warm, g_jobs);

        d.seconds_tuning = std::chrono::duration<double>(t1 - t0).count();
        d.seconds_main = std::chrono::duration<double>(t2 - t1).count();
        return d;
    }();
    return ds;
}

double censored_iters(const TrainResult& r, double threshold) {
    const auto it = iterations_to_gap(r.metrics, threshold);
    return it ? static_cast<double>(*it) : static_cast<double>(r.metrics.size() + 1);
}

Verdict desk_convergence() {
    const auto& d = desk_scale();
    std::vector<double> po_gap;
    std::vector<double> rf_gap;
    std::vector<double> po_it;
    std::vector<double> rf_it;
    for (int i = 0; i < DeskScale::kCount; ++i) {
        po_gap.push_back(*d.po[i].metrics.back().gap);
        rf_gap.push_back(*d.rf[i].metrics.back().gap);
        po_it.push_back(censored_iters(d.po[i], DeskScale::kThreshold));
        rf_it.push_back(censored_iters(d.rf[i], DeskScale::kThreshold));
    }
    const double ratio = median(rf_it) / median(po_it);
    const bool gap_ok = mean(po_gap) <= 0.02;
    const bool vs_rf = mean(po_gap) <= mean(rf_gap);
    const bool speed_ok = ratio >= 1.2;
    const bool time_ok = d.seconds_main + d.seconds_tuning <= 900.0;
    std::ostringstream s;
    s << "alpha=" << d.selection.alpha << "; mean gap PO " << fmt("%.3f%%", 100 * mean(po_gap)) << " (limit 2%) "
      << (gap_ok ? "ok" : "FAIL") << ", RF " << fmt("%.3f%%", 100 * mean(rf_gap)) << " -> PO<=RF "
      << (vs_rf ? "ok" : "FAIL") << "; median iters-to-1% PO " << median(po_it) << ", RF " << median(rf_it)
      << ", RF/PO " << fmt("%.3f", ratio) << " (limit 1.2) " << (speed_ok ? "ok" : "FAIL") << "; "
      << fmt("%.0f", d.seconds_tuning + d.seconds_main) << "s";
    return {gap_ok && vs_rf && speed_ok && time_ok, s.str()};
}

Verdict entropy_claim() {
    const auto& d = desk_scale();
    const std::size_t early = static_cast<std::size_t>(0.2 * d.po_cfg.steps);
    auto early_mean = [&](const std::vector<TrainResult>& runs) {
        double total = 0.0;
        for (const auto& r : runs) {
            double s = 0.0;
            for (std::size_t t = 0; t < early; ++t) s += r.metrics[t].trajectory_entropy;
            total += s / static_cast<double>(early);
        }
        return total / static_cast<double>(runs.size());
    };
    const double po = early_mean(d.po);
    const double rf = early_mean(d.rf);
    return {po > rf, "mean entropy over first " + std::to_string(early) + " steps: PO " + fmt("%.4f", po) + ", RF " +
                         fmt("%.4f", rf)};
}

// Consistency of a policy on a fresh evaluation batch with a per-instance seed that
// does not depend on which policy is scored.
double eval_consistency(const HeatmapPolicy& policy, const Instance& inst, std::size_t i) {
    Rng rng(split_seed(DeskScale::kRoot, SeedStream::kEvaluation, i));
    const auto batch = sample_tours(policy, inst, 16, rng);
    const auto c = consistency_metric(policy, inst, batch);
    return c ? c->value : 0.0;
}

Verdict consistency_claim() {
    const auto& d = desk_scale();
    std::vector<double> po;
    std::vector<double> rf;
    std::vector<double> ft;
    for (std::size_t i = 0; i < d.instances.size(); ++i) {
        po.push_back(eval_consistency(d.po[i].policy, d.instances[i], i));
        rf.push_back(eval_consistency(d.rf[i].policy, d.instances[i], i));
        ft.push_back(eval_consistency(d.finetuned[i].policy, d.instances[i], i));
    }
    const bool beats = mean(po) > mean(rf);
    const bool keeps = mean(ft) >= mean(po);
    return {beats && keeps, "final consistency PO " + fmt("%.4f", mean(po)) + ", RF " + fmt("%.4f", mean(rf)) +
                                (beats ? " ok" : " FAIL") + "; after 50 fine-tune steps PO " + fmt("%.4f", mean(ft)) +
                                (keeps ? " ok" : " FAIL")};
}

Verdict finetune_claim() {
    const auto& d = desk_scale();
    int improved = 0;
    int degraded = 0;
    int optimal_before = 0;
    for (std::size_t i = 0; i < d.instances.size(); ++i) {
        const double opt = *d.optima[i];
        const double before = (greedy_decode(d.po[i].policy, d.instances[i]).length - opt) / opt;
        const double after = (greedy_decode(d.finetuned[i].policy, d.instances[i]).length - opt) / opt;
        improved += after < before;
        degraded += after > before + 1e-9;
        optimal_before += before <= 1e-12;
    }

    // Monotonicity of 2-opt on 1e5 random tours spread over the criterion instances.
    std::vector<int> violations(d.instances.size(), 0);
    const std::size_t per_instance = 100000 / d.instances.size() + 1;
    parallel_for(d.instances.size(), g_jobs, [&](std::size_t i) {
        Rng rng(split_seed(DeskScale::kRoot, SeedStream::kLocalSearch, i));
        const auto& inst = d.instances[i];
        for (std::size_t t = 0; t < per_instance; ++t) {
            const Tour start = make_tour(inst, random_perm(inst.size(), rng));
            const Tour out = two_opt(inst, start, LsConfig{kUnlimitedMoves, LsStrategy::kFirstImprovement}, rng);
            violations[i] += out.reward < start.reward;
        }
    });
    int total_violations = 0;
    for (int v : violations) total_violations += v;
    const std::size_t tours = per_instance * d.instances.size();

    const int needed = static_cast<int>(std::ceil(0.7 * static_cast<double>(d.instances.size())));
    const bool pass = improved >= needed && degraded == 0 && total_violations == 0;
    std::ostringstream s;
    s << "greedy gap improved on " << improved << '/' << d.instances.size() << " (need " << needed << "), degraded on "
      << degraded << " (need 0), already optimal before " << optimal_before << "; 2-opt violations "
      << total_violations << " on " << tours << " random tours";
    return {pass, s.str()};
}

// ------------------------------------------------------------------ 9

Verdict exact_distribution() {
    Rng rng(909);
    const auto inst = generate_uniform(5, 1, 909).front();
    const auto policy = random_policy(5, rng);
    Permutation perm{0, 1, 2, 3, 4};
    std::map<Permutation, double> exact;
    double total = 0.0;
    do {
        const double p = std::exp(score_tour(policy, inst, perm).log_prob);
        exact[perm] = p;
        total += p;
    } while (std::next_permutation(perm.begin() + 1, perm.end()));

    const int draws = 200000;
    std::map<Permutation, int> counts;
    Rng sampler(split_seed(909, SeedStream::kEvaluation, 0));
    const auto batch = sample_tours(policy, inst, draws, sampler);
    for (const auto& t : batch.tours) ++counts[t.perm];
    double worst_z = 0.0;
    int outside = 0;
    for (const auto& [p, prob] : exact) {
        const double freq = static_cast<double>(counts[p]) / draws;
        const double se = std::sqrt(prob * (1.0 - prob) / draws);
        const double z = std::abs(freq - prob) / se;
        worst_z = std::max(worst_z, z);
        outside += z > 3.0;
    }
    const bool sum_ok = std::abs(total - 1.0) <= 1e-9;
    return {sum_ok && outside == 0, "sum of exp(score) - 1 = " + fmt("%.3g", total - 1.0) + "; " +
                                        std::to_string(exact.size()) + " tours, worst deviation " +
                                        fmt("%.2f", worst_z) + " SE over " + std::to_string(draws) + " draws"};
}

// ------------------------------------------------------------------ 10

int cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = prefco::cli::run(args, out, err);
    if (code != 0) std::cerr << err.str();
    return code;
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") {
            files[fs::relative(e.path(), dir).string()] = prefco::cli::read_file(e.path());
        }
    }
    return files;
}

Verdict determinism() {
    const fs::path root = g_workdir / "determinism";
    fs::remove_all(root);
    const auto p = [&](const std::string& rel) { return (root / rel).string(); };
    bool ok = cli({"--seed", "1010", "generate", "--n", "12", "--count", "12", "--out", p("inst")}) == 0;

    // Each command runs at one level, then replays from its manifest at the other.
    ok = ok && cli({"--seed", "1010", "--jobs", "1", "train", "--instances", p("inst"), "--set", "steps=80",
                    "--set", "init=neg_distance", "--set", "init_scale=6", "--out", p("train1")}) == 0;
    ok = ok && cli({"--jobs", "8", "train", "--from-manifest", p("train1/manifest.json"), "--out", p("train8")}) == 0;
    ok = ok && cli({"--jobs", "8", "finetune", "--run", p("train1"), "--steps", "10", "--out", p("ft8")}) == 0;
    ok = ok && cli({"--jobs", "1", "finetune", "--from-manifest", p("ft8/manifest.json"), "--out", p("ft1")}) == 0;
    ok = ok && cli({"--seed", "1010", "--jobs", "1", "compare", "--instances", p("inst"), "--set-a", "steps=40",
                    "--set-b", "steps=40", "--out", p("cmp1")}) == 0;
    ok = ok && cli({"--jobs", "8", "compare", "--from-manifest", p("cmp1/manifest.json"), "--out", p("cmp8")}) == 0;
    if (!ok) return {false, "a CLI invocation failed"};

    std::size_t compared = 0;
    std::size_t identical = 0;
    for (const auto& [a, b] : {std::pair{"train1", "train8"}, {"ft1", "ft8"}, {"cmp1", "cmp8"}}) {
        const auto fa = csv_files(root / a);
        const auto fb = csv_files(root / b);
        for (const auto& [name, content] : fa) {
            ++compared;
            const auto it = fb.find(name);
            identical += it != fb.end() && it->second == content;
        }
        if (fa.size() != fb.size()) return {false, std::string(a) + " and " + b + " have different file sets"};
    }
    fs::remove_all(root);
    return {compared > 0 && identical == compared, std::to_string(identical) + "/" + std::to_string(compared) +
                                                       " metrics CSVs byte-identical between --jobs 1 and --jobs 8"};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    g_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    g_workdir = fs::temp_directory_path() / "prefco_acceptance";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" && i + 1 < argc) {
            g_jobs = std::max(1, std::stoi(argv[++i]));
        } else if (arg == "--workdir" && i + 1 < argc) {
            g_workdir = argv[++i];
        } else {
            wanted.push_back(std::stoi(arg));
        }
    }
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    const std::map<int, std::function<Verdict()>> criteria{
        {1, gradient_fidelity}, {2, oracle_equivalence}, {3, affine_invariance}, {4, exponential_mean_form},
        {5, desk_convergence},  {6, entropy_claim},      {7, consistency_claim}, {8, finetune_claim},
        {9, exact_distribution}, {10, determinism},
    };

    bool all = true;
    for (int k : wanted) {
        const auto it = criteria.find(k);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << k << "\n";
            return 1;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << "  ["
                  << fmt("%.1f", secs) << "s]" << std::endl;
        all = all && v.pass;
    }
    return all ? 0 : 1;
}

#include <benchmark/benchmark.h>

#include "prefco/local_search.hpp"
#include "prefco/oracle.hpp"
#include "prefco/policy.hpp"
#include "prefco/preference.hpp"
#include "prefco/trainer.hpp"

namespace prefco {
namespace {

Instance bench_instance(int n) { return generate_uniform(n, 1, 42).front(); }

void BM_SampleTours(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto inst = bench_instance(n);
    const auto policy = init_heatmap(inst, HeatmapInit::kNegDistance, 6.0);
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_tours(policy, inst, 16, rng));
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_SampleTours)->Arg(15)->Arg(50)->Arg(100);

void BM_GradLogProb(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto inst = bench_instance(n);
    const auto policy = init_heatmap(inst, HeatmapInit::kNegDistance, 6.0);
    Rng rng(2);
    const auto batch = sample_tours(policy, inst, 16, rng);
    Matrix grad(inst.size(), inst.size(), 0.0);
    for (auto _ : state) {
        for (const auto& t : batch.tours) accumulate_grad_log_prob(policy, t.perm, 1.0, grad);
        benchmark::DoNotOptimize(grad.data().data());
    }
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_GradLogProb)->Arg(15)->Arg(50)->Arg(100);

void BM_PreferenceLoss(benchmark::State& state) {
    const auto inst = bench_instance(15);
    const auto policy = init_heatmap(inst, HeatmapInit::kNegDistance, 6.0);
    Rng rng(3);
    const auto batch = sample_tours(policy, inst, static_cast<int>(state.range(0)), rng);
    const auto labels = make_labels(batch.rewards);
    const PreferenceModel model{PreferenceKind::kBradleyTerry};
    for (auto _ : state) benchmark::DoNotOptimize(po_loss(model, 0.05, batch, labels));
}
BENCHMARK(BM_PreferenceLoss)->Arg(16)->Arg(64)->Arg(256);

void BM_TwoOpt(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto inst = bench_instance(n);
    Rng rng(4);
    const auto start = greedy_decode(HeatmapPolicy(inst.size()), inst);
    for (auto _ : state) {
        benchmark::DoNotOptimize(two_opt(inst, start, LsConfig{kUnlimitedMoves, LsStrategy::kFirstImprovement}, rng));
    }
}
BENCHMARK(BM_TwoOpt)->Arg(15)->Arg(50)->Arg(100);

void BM_HeldKarp(benchmark::State& state) {
    const auto inst = bench_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_held_karp(inst));
}
BENCHMARK(BM_HeldKarp)->Arg(10)->Arg(13)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
    const auto inst = bench_instance(15);
    TrainConfig cfg;
    cfg.steps = 1;
    cfg.init = HeatmapInit::kNegDistance;
    cfg.init_scale = 6.0;
    for (auto _ : state) benchmark::DoNotOptimize(train_instance(inst, cfg));
}
BENCHMARK(BM_TrainStep);

}  // namespace
}  // namespace prefco

BENCHMARK_MAIN();

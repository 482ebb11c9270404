// Microbenchmarks for the training hot paths. The interesting knob is the
// horizon (dataset size doubles per extra length), so the gradient and
// training benchmarks sweep l_max.

#include <benchmark/benchmark.h>

#include "attnlab/cot.hpp"
#include "attnlab/diagnostics.hpp"
#include "attnlab/gradients.hpp"
#include "attnlab/maxmargin.hpp"
#include "attnlab/training.hpp"

using namespace attnlab;

namespace {

TrainConfig even_config(int l_max) {
    TrainConfig cfg;
    cfg.task = Task::even_pairs;
    cfg.l_max = l_max;
    return cfg;
}

// A short trained prefix so the benchmarked states are not all-zero.
ModelParams warm_params(const TrainConfig& cfg, const TaskDataset& ds, long steps) {
    ModelParams p = init_params(cfg);
    for (long t = 0; t < steps; ++t) train_step(p, ds, cfg, t);
    return p;
}

void BM_LossGradients(benchmark::State& state) {
    const TrainConfig cfg = even_config(static_cast<int>(state.range(0)));
    const TaskDataset ds = cfg.build_dataset();
    const ModelParams p = warm_params(cfg, ds, 50);
    for (auto _ : state) {
        benchmark::DoNotOptimize(loss_gradients(p, ds));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.examples.size()));
}
BENCHMARK(BM_LossGradients)->Arg(4)->Arg(6)->Arg(8);

void BM_TrainStep(benchmark::State& state) {
    const TrainConfig cfg = even_config(static_cast<int>(state.range(0)));
    const TaskDataset ds = cfg.build_dataset();
    ModelParams p = init_params(cfg);
    long t = 0;
    for (auto _ : state) {
        train_step(p, ds, cfg, t++);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.examples.size()));
}
BENCHMARK(BM_TrainStep)->Arg(6);

void BM_ParityTrainStep(benchmark::State& state) {
    TrainConfig cfg;
    cfg.task = Task::parity_cot;
    const TaskDataset ds = cfg.build_dataset();
    ModelParams p = init_params(cfg);
    long t = 0;
    for (auto _ : state) {
        train_step(p, ds, cfg, t++);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.examples.size()));
}
BENCHMARK(BM_ParityTrainStep);

void BM_MaxMarginSolve(benchmark::State& state) {
    const TrainConfig cfg = even_config(6);
    const TaskDataset ds = cfg.build_dataset();
    const ModelParams p = warm_params(cfg, ds, cfg.t0);
    const PooledDataset pooled = pool_dataset(p, ds);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_max_margin(pooled));
    }
}
BENCHMARK(BM_MaxMarginSolve);

void BM_TruncatedCotExhaustive(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const Comparator comp = ideal_comparator();
    const std::vector<Sequence> inputs = enumerate_sequences(L);
    for (auto _ : state) {
        int acc = 0;
        for (const Sequence& s : inputs) acc += truncated_cot_infer(comp, s).prediction;
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(inputs.size()));
}
BENCHMARK(BM_TruncatedCotExhaustive)->Arg(8)->Arg(10);

void BM_Phase1Report(benchmark::State& state) {
    TrainConfig cfg = even_config(6);
    cfg.t0 = 20;
    cfg.total_steps = 40;
    cfg.snapshot_every = 5;
    const Trajectory traj = train(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase1_report(traj));
    }
}
BENCHMARK(BM_Phase1Report);

}  // namespace

BENCHMARK_MAIN();

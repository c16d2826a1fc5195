// Epoch throughput for one optimization restart on each encoder backend.
#include <benchmark/benchmark.h>

#include "kgroup/generators.hpp"
#include "kgroup/trainer.hpp"

namespace {

using namespace kgroup;

void run_epochs(benchmark::State& state, EncoderBackend backend) {
  int n = static_cast<int>(state.range(0));
  Graph g = random_graph(n, 3 * n, 3);
  CompiledLoss loss = compile_graph_coloring(g, 4);
  TrainConfig tc;
  tc.opt.epochs = 50;
  tc.opt.restarts = 1;
  tc.encoder.backend = backend;
  tc.snapshot_interval = 50;
  tc.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(loss, tc));
  state.SetItemsProcessed(state.iterations() * tc.opt.epochs);
}

void BM_TrainDirect(benchmark::State& state) { run_epochs(state, EncoderBackend::kDirect); }
BENCHMARK(BM_TrainDirect)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_TrainMessagePassing(benchmark::State& state) {
  run_epochs(state, EncoderBackend::kMessagePassing);
}
BENCHMARK(BM_TrainMessagePassing)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

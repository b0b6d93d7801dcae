#include "gazegrasp/config.hpp"
#include "gazegrasp/raycast_batch.hpp"

#include <benchmark/benchmark.h>

using namespace gazegrasp;

namespace {

const SessionConfig& cfg() {
  static const SessionConfig c = load_session_config(std::string(GAZEGRASP_DATA_DIR) + "/session.json");
  return c;
}

// Full-image grid; stride taken from the benchmark argument.
std::vector<Pixel> grid(benchmark::State& state) {
  return pixel_grid({0, 0, 1280, 720}, static_cast<double>(state.range(0)));
}

void BM_CastSerial(benchmark::State& state) {
  const auto px = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(cast_batch_serial(cfg().camera, cfg().scene, px));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(px.size()));
}

void BM_CastParallel(benchmark::State& state) {
  const auto px = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(cast_batch(cfg().camera, cfg().scene, px));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(px.size()));
}

}  // namespace

BENCHMARK(BM_CastSerial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CastParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "banditlink/bandit.hpp"
#include "banditlink/channel.hpp"
#include "banditlink/codes.hpp"
#include "banditlink/graphs.hpp"
#include "banditlink/protocols.hpp"

using namespace banditlink;

namespace {

void bm_alpha_power(benchmark::State& state) {
  const auto base = ConfusabilityGraph::cycle(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    StrongPower p(base, n);
    benchmark::DoNotOptimize(independence_number(p).value);
  }
}
BENCHMARK(bm_alpha_power)->Args({5, 2})->Args({6, 2})->Args({5, 3})->Unit(benchmark::kMicrosecond);

void bm_smallest_singular_value(benchmark::State& state) {
  const auto w = make_typewriter(static_cast<int>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(smallest_singular_value(w));
}
BENCHMARK(bm_smallest_singular_value)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

void bm_sample_output(benchmark::State& state) {
  const auto w = make_typewriter(6, 0.3);
  RandomStream rng(7u);
  int x = 0;
  for (auto _ : state) {
    x = sample_output(w, x, rng);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(bm_sample_output);

void bm_packet_roundtrip(benchmark::State& state) {
  const auto w = make_typewriter(6, 0.3);
  const SupportSet s(w);
  const PacketCodec codec(DigitCode::scheduled(parity_schedule(6), s), 63);
  RandomStream rng(11u);
  std::int64_t m = 0;
  std::vector<int> received;
  for (auto _ : state) {
    const auto xs = codec.encode(m % 63, 1);
    received.clear();
    for (int x : xs) received.push_back(sample_output(w, x, rng));
    benchmark::DoNotOptimize(codec.decode(received, 1));
    ++m;
  }
}
BENCHMARK(bm_packet_roundtrip);

void bm_clean_run(benchmark::State& state) {
  const BanditInstance inst({1.0, 0.5, 0.0, -0.5, -1.0});
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coupled_clean_run(inst, 0.1, seed++).tau);
  }
}
BENCHMARK(bm_clean_run)->Unit(benchmark::kMillisecond);

void bm_calendar_run(benchmark::State& state) {
  const BanditInstance inst({1.0, 0.7, 0.4, 0.1, -0.2, -0.5});
  const auto w = make_typewriter(6, 0.3);
  const auto sched = parity_schedule(6);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_case2_scheme2(inst, w, sched, 0.1, seed++, PhasedSeEngine::kDefaultRoundCap, false)
            .tau);
  }
}
BENCHMARK(bm_calendar_run)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

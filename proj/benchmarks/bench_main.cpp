#include <benchmark/benchmark.h>

#include <array>

#include "qss/protocols.hpp"
#include "qss/schemes.hpp"
#include "qss/structures.hpp"
#include "qss/verifier.hpp"

using namespace qss;

namespace {

const std::array<double, 2> kMixed = {0.5, 0.5};

ConstructedScheme result1_for(int n) {
  std::vector<int> b;
  for (int i = 1; i <= n / 2; ++i) b.push_back(i);
  return build_result1(n, PlayerSubset::from_players(n, b));
}

void BM_PartialTrace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto r = result1_for(n);
  const auto st = share_state(r.scheme, kMixed);
  std::vector<std::string> keep = {"R"};
  for (int p = 1; p <= n / 2; ++p) keep.push_back(r.scheme.registers_of(PlayerSubset::from_players(n, {p}))[0]);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(st, keep));
}
BENCHMARK(BM_PartialTrace)->DenseRange(3, 7, 1);

void BM_Verify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto r = result1_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(verify(r.scheme, r.gamma, Model::kGeneralized));
}
BENCHMARK(BM_Verify)->DenseRange(3, 7, 1)->Unit(benchmark::kMillisecond);

void BM_EnumerateHyperstars(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_hyperstars(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateHyperstars)->DenseRange(3, 5, 1)->Unit(benchmark::kMillisecond);

void BM_DecouplingDecoder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto r = result1_for(n);
  const auto st = share_state(r.scheme, kMixed);
  const auto regs = r.scheme.registers_of(r.gamma.minimal_sets().front());
  for (auto _ : state) benchmark::DoNotOptimize(decoupling_decoder(st, regs, {"R"}));
}
BENCHMARK(BM_DecouplingDecoder)->DenseRange(3, 7, 1)->Unit(benchmark::kMillisecond);

void BM_ReproduceTables(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reproduce_tables(5));
}
BENCHMARK(BM_ReproduceTables)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

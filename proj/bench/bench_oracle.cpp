#include <benchmark/benchmark.h>

#include "bapa/oracle.hpp"
#include "bapa/text_format.hpp"

using namespace bapa;

namespace {

const Formula& sentence() {
  static const Formula f = parse_formula(
      "all set x. all set y. ex set z. card(x union y) = card(z) & (x inter y) subseteq z");
  return f;
}

void BM_OracleSerial(benchmark::State& st) {
  unsigned u = static_cast<unsigned>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(oracle_serial(sentence(), u));
}

void BM_OracleParallel(benchmark::State& st) {
  unsigned u = static_cast<unsigned>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(oracle(sentence(), u));
}

}  // namespace

BENCHMARK(BM_OracleSerial)->DenseRange(2, 6, 1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OracleParallel)->DenseRange(2, 6, 1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

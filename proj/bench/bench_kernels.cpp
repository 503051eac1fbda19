#include <benchmark/benchmark.h>

#include "ncalg/freegroup.hpp"
#include "ncalg/modlab.hpp"
#include "ncalg/parallel.hpp"

using namespace ncalg;

namespace {

Execution mode(const benchmark::State& st) { return st.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_InjectivitySweep(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(injectivity_sweep(5, 5, Ring::integers(), mode(st)));
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_InjectivitySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OrderAxioms(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_order_axioms(3, 1, mode(st)));
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_OrderAxioms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Villamayor(benchmark::State& st) {
  // Z/12, rank 2: the search runs over K x K.
  const Ring r = Ring::integers_mod(12);
  const Presentation p(r, 2, MatrixOverRing(r, {{r.from_int(4), r.from_int(6)}, {r.from_int(3), r.from_int(0)}}));
  for (auto _ : st) benchmark::DoNotOptimize(villamayor_check(p, 1000000, mode(st)));
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Villamayor)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}

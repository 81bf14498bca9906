#include <benchmark/benchmark.h>

#include "gvlam/kernels.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/theory.hpp"

using namespace gvlam;
using namespace gvlam::kernels;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "omp x" + std::to_string(max_threads()) : "serial"); }

void BM_diaconis(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(diaconis_sweep(static_cast<unsigned>(s.range(1)), exec_of(s)));
  label(s);
}

void BM_lipschitz(benchmark::State& s) {
  auto [ix, iy] = to_int_spaces(timed_space(s.range(1)), timed_space(s.range(1)));
  auto maps = enumerate_nonexpansive(ix, iy, 1000000);
  for (auto _ : s) benchmark::DoNotOptimize(lipschitz_sweep(ix, iy, maps, {0, 1, 2, 3, 4}, exec_of(s)));
  s.counters["pairs"] = static_cast<double>(maps.size() * maps.size());
  label(s);
}

void BM_hom_distance(benchmark::State& s) {
  static const Theory th = parse_theory(
      "quantale metric\nsemiring nat\nground X\nfamily wait[n] : X -> X\nop max : X, X -> X\n");
  MetModel m = MetModel::timed(th, static_cast<std::size_t>(s.range(1)));
  Context c = parse_context("x : X, y : X, z : X");
  MetMap f = m.interp(c, parse_term("max(wait_1(x), max(y, z))"));
  MetMap g = m.interp(c, parse_term("max(x, max(wait_2(y), z))"));
  for (auto _ : s) benchmark::DoNotOptimize(hom_distance_sweep(m, f, g, exec_of(s)));
  s.counters["points"] = static_cast<double>(f.table.size());
  label(s);
}

}  // namespace

BENCHMARK(BM_diaconis)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lipschitz)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hom_distance)->ArgsProduct({{0, 1}, {8, 16}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// serial reference vs OpenMP for the data-parallel kernels; arg 0 = serial, 1 = openmp
#include <benchmark/benchmark.h>

#include "horolab/averages.hpp"
#include "horolab/bn.hpp"
#include "horolab/dimension.hpp"
#include "horolab/expsum.hpp"
#include "horolab/funcspace.hpp"

using namespace horo;

namespace {
Backend backend(const benchmark::State& st) { return st.range(0) ? Backend::openmp : Backend::serial; }
const auto squares = SamplingScheme::polynomial({0, 0, 1});
}  // namespace

static void BM_l2_norms(benchmark::State& st) {
  auto f = make_height_band(1.3, 2.2, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(l2_norms(f, squares, {64, 128}, 2000, 1, 50.0, backend(st)).norms);
}
BENCHMARK(BM_l2_norms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_mc_mean(benchmark::State& st) {
  auto f = make_angular_band(1.2, 2.0, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(mc_mean(f, 200000, 3, 50.0, backend(st)).mean);
}
BENCHMARK(BM_mc_mean)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_box_count(benchmark::State& st) {
  auto f = make_height_band(1.3, 2.2, 0.2);
  GridSpec g;
  g.delta = 0.15;
  BoxOptions o;
  o.backend = backend(st);
  for (auto _ : st) benchmark::DoNotOptimize(box_count_bad(f, 128, 0.2, g, squares, o).bad);
}
BENCHMARK(BM_box_count)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_moment(benchmark::State& st) {
  const IntPolynomial p({0, 0, 1});
  for (auto _ : st) benchmark::DoNotOptimize(moment_integral(p, 512, 4, 0, false, backend(st)).value);
}
BENCHMARK(BM_moment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_bn_norm(benchmark::State& st) {
  const IntPolynomial p({0, 0, 1});
  const std::vector<KirillovFunction> fs{kirillov_basis(0.15, 0), kirillov_basis(0.3, 0)};
  BnOptions o;
  o.backend = backend(st);
  for (auto _ : st) benchmark::DoNotOptimize(bn_spectral_norms(p, 64, fs, o).front().total);
}
BENCHMARK(BM_bn_norm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

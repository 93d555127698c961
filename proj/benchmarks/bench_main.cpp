#include <benchmark/benchmark.h>

#include "gravfact/catalog.hpp"
#include "gravfact/cauchy.hpp"
#include "gravfact/contour.hpp"
#include "gravfact/spacetime.hpp"
#include "gravfact/wh.hpp"

using namespace gravfact;

static void BM_SingularS(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto g = AdmissibleContour::unit_circle(1, N);
  const auto f = BoundarySamples::from_function(
      g, [](cplx t) { return std::exp(t) / (t - cplx(3.0, 0.0)); });
  for (auto _ : state) benchmark::DoNotOptimize(singular_S(f));
}
BENCHMARK(BM_SingularS)->Arg(64)->Arg(256)->Arg(1024);

static void BM_ScalarFactorize(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto g = AdmissibleContour::unit_circle(1, N);
  const auto f = BoundarySamples::from_function(g, [](cplx t) {
    return (t - cplx(2.0, 0.0)) / (t - cplx(3.0, 0.0));
  });
  for (auto _ : state) benchmark::DoNotOptimize(scalar_factorize(f));
}
BENCHMARK(BM_ScalarFactorize)->Arg(64)->Arg(256)->Arg(1024);

static void BM_FactorizeSchwarzschild(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto fam = builtin("schwarzschild", {{"m", 1.0}});
  const WeylPoint p = fam.point(1.0, 0.0);
  const auto g = AdmissibleContour::bump_contour(1, 1.2, N);
  for (auto _ : state)
    benchmark::DoNotOptimize(factorize_general(fam, p, g, N));
}
BENCHMARK(BM_FactorizeSchwarzschild)->Arg(64)->Arg(128)->Arg(256);

static void BM_BesselJ(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_J(0, x));
    x += 1e-6;
  }
}
BENCHMARK(BM_BesselJ);

BENCHMARK_MAIN();

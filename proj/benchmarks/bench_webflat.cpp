#include <benchmark/benchmark.h>

#include "webflat/curvature.hpp"
#include "webflat/families.hpp"

using namespace webflat;
using web::WebSpec;

static void BM_PolyProduct(benchmark::State& state) {
  const poly::VarList v{"x", "y", "z"};
  auto a = poly::parse_poly("(x + 2*y - 3/2*z)^4 + x*y*z", v);
  auto b = poly::parse_poly("(x - y + i*z)^4 - y^2*z^2", v);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyProduct);

static void BM_InflectionDivisor(benchmark::State& state) {
  const auto F = fam::fermat(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fol::inflection_divisor(F));
}
BENCHMARK(BM_InflectionDivisor)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

static void BM_InvariantLines(benchmark::State& state) {
  const auto F = fam::fermat(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fol::invariant_lines(F));
}
BENCHMARK(BM_InvariantLines)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_DiscriminantStructural(benchmark::State& state) {
  const WebSpec W = WebSpec::of(fam::fermat(2)) * WebSpec::of(fam::fermat(3));
  for (auto _ : state) benchmark::DoNotOptimize(web::discriminant_structural(W));
}
BENCHMARK(BM_DiscriminantStructural)->Unit(benchmark::kMillisecond);

static void BM_Slopes(benchmark::State& state) {
  const auto D = curv::DualWeb::of(WebSpec::of(fam::fermat(3)) * WebSpec::of(fam::fermat(5)));
  const curv::DualPoint P{{0.31, 0.2}, {-0.45, 0.6}};
  for (auto _ : state) {
    if (state.range(0) == 53) {
      benchmark::DoNotOptimize(curv::slopes_at<double>(D, P));
    } else {
      benchmark::DoNotOptimize(curv::slopes_at<num::DoubleDouble>(D, P));
    }
  }
}
BENCHMARK(BM_Slopes)->Arg(53)->Arg(106)->Unit(benchmark::kMicrosecond);

// One curvature sample with the finite-difference cross-check, on webs of
// 5, 8 and 13 directions.
static void BM_CurvatureSample(benchmark::State& state) {
  const auto L = [](long a, long b, long c) { return geo::LineInPlane(a, b, c); };
  WebSpec W;
  switch (state.range(0)) {
    case 5: W = WebSpec::of(fam::fermat(2)) * WebSpec::of(fam::fermat(3)); break;
    case 8: W = WebSpec::of(fam::fermat(3)) * WebSpec::of(fam::fermat(5)); break;
    default:
      W = WebSpec::of(L(1, -1, 0)) * WebSpec::of(fam::homogeneous(3)) * WebSpec::of(fam::homogeneous(4)) *
          WebSpec::of(fam::homogeneous(5));
  }
  const auto D = curv::DualWeb::of(W);
  curv::CurvatureOptions opts;
  opts.precision_bits = static_cast<int>(state.range(1));
  const curv::DualPoint P{{0.31, 0.2}, {-0.45, 0.6}};
  for (auto _ : state) benchmark::DoNotOptimize(curv::curvature_at(D, P, opts));
}
BENCHMARK(BM_CurvatureSample)
    ->ArgsProduct({{5, 8, 13}, {53, 106}})
    ->ArgNames({"k", "bits"})
    ->Unit(benchmark::kMillisecond);

static void BM_FlatnessSmall(benchmark::State& state) {
  const WebSpec W = WebSpec::of(fam::fermat(2)) * WebSpec::of(fam::fermat(3));
  curv::FlatnessConfig cfg;
  cfg.samples = 20;
  for (auto _ : state) benchmark::DoNotOptimize(curv::flatness_test(W, cfg));
}
BENCHMARK(BM_FlatnessSmall)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

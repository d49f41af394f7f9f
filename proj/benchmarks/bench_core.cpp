#include <benchmark/benchmark.h>

#include <spin7/catalog.hpp>
#include <spin7/curvature.hpp>
#include <spin7/pde.hpp>
#include <spin7/specialfns.hpp>

using namespace spin7;

namespace {

const StructureBundle& glps() {
  static StructureBundle b = buildBundle("glps_spin7");
  return b;
}

Point glpsPoint() { return glps().samplePoint(); }

void BM_dPhi_eval(benchmark::State& state) {
  DifferentialForm d = exteriorDerivative(glps().spin7->Phi);
  Point p = glpsPoint();
  for (auto _ : state) benchmark::DoNotOptimize(d.maxAbsCoeff(p));
}
BENCHMARK(BM_dPhi_eval);

void BM_metric_eval(benchmark::State& state) {
  const MetricField& g = glps().spin7->metric;
  Point p = glpsPoint();
  for (auto _ : state) benchmark::DoNotOptimize(g.valueMatrix(p));
}
BENCHMARK(BM_metric_eval);

void BM_curvature_sample(benchmark::State& state) {
  const MetricField& g = glps().spin7->metric;
  Point p = glpsPoint();
  for (auto _ : state) benchmark::DoNotOptimize(curvatureAt(g, p));
}
BENCHMARK(BM_curvature_sample);

void BM_curvature_operator_rank(benchmark::State& state) {
  const MetricField& g = glps().spin7->metric;
  std::vector<Point> pts{glpsPoint()};
  for (auto _ : state)
    benchmark::DoNotOptimize(curvatureOperatorRank(g, pts));
}
BENCHMARK(BM_curvature_operator_rank);

void BM_root_solve(benchmark::State& state) {
  double H = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_s_of_H(1.3, 0.7, H));
    H = (H < 10.0) ? H + 0.1 : 0.1;
  }
}
BENCHMARK(BM_root_solve);

void BM_pcf_eval(benchmark::State& state) {
  double f, df, ddf, s = 0.0;
  for (auto _ : state) {
    specialfns::pcf_u0(s, f, df, ddf);
    benchmark::DoNotOptimize(f);
    s = (s < 8.0) ? s + 0.01 : 0.0;
  }
}
BENCHMARK(BM_pcf_eval);

void BM_ma_evolution_step(benchmark::State& state) {
  std::vector<int> shape(4, static_cast<int>(state.range(0)));
  std::vector<double> h(4, 0.5), org(4, -1.0);
  std::vector<bool> per(4, false);
  GridField F0 = GridField::fromFunction(
      shape, h, org, per,
      [](const std::vector<double>& x) {
        return -0.25 *
               (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
      },
      0.5);
  GridField F1 = GridField::fromFunction(
      shape, h, org, per, [](const std::vector<double>&) { return 0.0; },
      0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        evolve_monge_ampere(F0, F1, 0.0, {0.5, 0.55}, 1));
  state.SetItemsProcessed(state.iterations() * F0.size());
}
BENCHMARK(BM_ma_evolution_step)->Arg(5)->Arg(9);

void BM_reduction_check(benchmark::State& state) {
  const StructureBundle& b = glps();
  std::vector<Point> pts{b.red1->chart.point({0.3, 0.4, 0.2, 0.1, 0.5,
                                              1.2})};
  for (auto _ : state)
    benchmark::DoNotOptimize(check_reduction_I(*b.red1, pts));
}
BENCHMARK(BM_reduction_check);

}  // namespace

BENCHMARK_MAIN();

// Serial reference vs OpenMP for the data-parallel kernels, Jacobi vs Eigen
// for small Hermitian eigenproblems, and the two projection schemes.

#include "coh/model_centro3.hpp"
#include "coh/model_spinboson.hpp"
#include "coh/model_uniform.hpp"
#include "coh/symmetry.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace coh;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "omp" : "serial"); }

void BM_RegionMesh(benchmark::State& s) {
  const Centro3Params c{0.7, std::pow(0.7, 4)};
  for (auto _ : s) benchmark::DoNotOptimize(centro3_region_mesh(c, 61, exec_of(s)));
  label(s);
}
BENCHMARK(BM_RegionMesh)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SymmetryGroup(benchmark::State& s) {
  const CMatrix c = sb_full_matrix(3, 0.6);
  for (auto _ : s) benchmark::DoNotOptimize(symmetry_group(c, exec_of(s)));
  label(s);
}
BENCHMARK(BM_SymmetryGroup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CurveSweep(benchmark::State& s) {
  AlphaStarOptions o;
  o.use_seeds = false;
  const std::vector<double> ls{0.1, 0.3, 0.5, 0.7, 0.9};
  for (auto _ : s) benchmark::DoNotOptimize(alpha_N_curve(4, ls, true, o, exec_of(s)));
  label(s);
}
BENCHMARK(BM_CurveSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MubSweep(benchmark::State& s) {
  AlphaStarOptions o;
  o.use_seeds = false;
  const std::vector<double> ls{0.1, 0.3, 0.5, 0.7, 0.9};
  for (auto _ : s) benchmark::DoNotOptimize(mub_sweep(4, ls, o, exec_of(s)));
  label(s);
}
BENCHMARK(BM_MubSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

CMatrix random_hermitian(int d) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

void BM_EigJacobi(benchmark::State& s) {
  const CMatrix h = random_hermitian(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(eig_hermitian(h));
}
BENCHMARK(BM_EigJacobi)->Arg(3)->Arg(6)->Arg(11)->Arg(16);

void BM_EigEigen(benchmark::State& s) {
  const CMatrix h = random_hermitian(static_cast<int>(s.range(0)));
  for (auto _ : s) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    benchmark::DoNotOptimize(es.eigenvalues());
  }
}
BENCHMARK(BM_EigEigen)->Arg(3)->Arg(6)->Arg(11)->Arg(16);

void BM_Solver(benchmark::State& s) {
  // uniform d=4 slightly inside and outside the threshold
  SolverOptions o;
  o.method = s.range(0) ? Method::douglas_rachford : Method::dykstra;
  const double g = g_d(0.6, 4);
  const double a = s.range(1) ? g - 0.01 : g + 0.01;
  const CMatrix c = uniform_coherence(4, 0.6);
  const auto p = white_noise_family(4, a);
  long iters = 0;
  for (auto _ : s) {
    const auto v = solve_gii(c, p, o);
    iters = v.iterations;
    benchmark::DoNotOptimize(v);
  }
  s.counters["iterations"] = static_cast<double>(iters);
  s.SetLabel(std::string(s.range(0) ? "douglas-rachford" : "dykstra") + (s.range(1) ? " feasible" : " infeasible"));
}
BENCHMARK(BM_Solver)->Args({0, 1})->Args({1, 1})->Args({0, 0})->Args({1, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

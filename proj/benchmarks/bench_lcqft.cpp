#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "lcqft/causal_lattice.hpp"
#include "lcqft/dirac_algebra.hpp"
#include "lcqft/field_solutions.hpp"
#include "lcqft/microlocal_cones.hpp"
#include "lcqft/quantum_algebras.hpp"

using namespace lcqft;

static void BM_FindIntertwiner(benchmark::State& state) {
  const auto a = dirac::weyl_representation(), b = dirac::standard_representation();
  for (auto _ : state) benchmark::DoNotOptimize(dirac::find_intertwiner(a, b));
}
BENCHMARK(BM_FindIntertwiner);

static void BM_QuasifreeNpoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto w2 = [](int i, int j) { return quantum::cplx(1.0 / (1.0 + i + j), 0.1 * (j - i)); };
  for (auto _ : state) benchmark::DoNotOptimize(quantum::quasifree_npoint(w2, n));
}
BENCHMARK(BM_QuasifreeNpoint)->DenseRange(2, 12, 2);

// Chain x_0 < x_1 < ... along the time axis; each link carries a random future null covector.
static cones::CovectorConfig chain(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cones::CovectorConfig cfg;
  for (int i = 0; i < n; ++i) {
    cfg.x.push_back(cones::Vec4(i, 0.0, 0.0, 0.0));
    cfg.xi.push_back(cones::Vec4::Zero());
  }
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::Vector3d s(g(rng), g(rng), g(rng));
    cones::Vec4 p;
    p << 1.0, s.normalized();
    cfg.xi[static_cast<std::size_t>(i)] += p;
    cfg.xi[static_cast<std::size_t>(i + 1)] -= p;
  }
  return cfg;
}

static void BM_InGammaN(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto cfg = chain(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(cones::in_gamma_n(cfg).member);
}
BENCHMARK(BM_InGammaN)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_WFScan(benchmark::State& state) {
  const auto u = cones::builtin_distribution("theta");
  cones::WFScanConfig cfg;
  cfg.directions = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cones::wf_decay_scan(u, cones::Vec2(0.0, 0.0), cfg));
}
BENCHMARK(BM_WFScan)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_LatticeRetarded(benchmark::State& state) {
  fields::Lattice1p1 l;
  l.nx = static_cast<int>(state.range(0));
  l.nt = 2 * l.nx;
  fields::LatticeField f = fields::LatticeField::Zero(l.nt, l.nx);
  f(l.nt / 4, l.nx / 2) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(fields::retarded(l, f));
}
BENCHMARK(BM_LatticeRetarded)->Arg(32)->Arg(128)->Arg(512);

static void BM_CausalFuture(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto l = lattice::LatticeSpacetime::flat(n, n, 0.5, 1.0);
  const auto O = lattice::Region::box(l, 1, 1, n / 2 - 2, n / 2 + 2);
  for (auto _ : state) benchmark::DoNotOptimize(lattice::causal_future(l, O, lattice::Mode::Inner));
}
BENCHMARK(BM_CausalFuture)->Arg(32)->Arg(64)->Arg(128);

static void BM_DeformStandard(benchmark::State& state) {
  const auto s = lattice::standard_scenario(16);
  for (auto _ : state) benchmark::DoNotOptimize(lattice::deform_and_certify(s.spec, s.K1, s.K2, 12).certified);
}
BENCHMARK(BM_DeformStandard)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

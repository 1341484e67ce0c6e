// Microbenchmarks for the hot paths: Kronecker products, the Hermitian
// eigendecomposition, minimal dilations, derivative chaining, and one seesaw
// restart. Run with --benchmark_filter=<regex> to select a subset.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "opalg/catalog.hpp"
#include "opalg/cpmaps.hpp"
#include "opalg/dilation.hpp"
#include "opalg/games.hpp"
#include "opalg/numerics.hpp"
#include "opalg/radon_nikodym.hpp"
#include "opalg/rng.hpp"
#include "opalg/sequential.hpp"

namespace {

const opalg::Tolerance kTol{};

void BM_Kron(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  opalg::Rng rng(1);
  const opalg::CMatrix a = rng.ginibre(n, n);
  const opalg::CMatrix b = rng.ginibre(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::kron(a, b));
  }
}
BENCHMARK(BM_Kron)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_EigHermitian(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  opalg::Rng rng(2);
  const opalg::CMatrix g = rng.ginibre(n, n);
  const opalg::CMatrix h = opalg::CMatrix::from_eigen(
      0.5 * (g.eigen() + Eigen::MatrixXcd(g.eigen().adjoint())));
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::eig_hermitian(h, kTol));
  }
}
BENCHMARK(BM_EigHermitian)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_StinespringMinimal(benchmark::State& state) {
  const std::int64_t kraus_count = state.range(0);
  opalg::Rng rng(3);
  std::vector<opalg::CMatrix> kraus;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  std::vector<Eigen::MatrixXcd> g;
  for (std::int64_t k = 0; k < kraus_count; ++k) {
    g.push_back(rng.ginibre(2, 2).eigen());
    s += g.back().adjoint() * g.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  const Eigen::MatrixXcd fix =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().adjoint();
  for (const auto& gk : g) {
    kraus.push_back(opalg::CMatrix::from_eigen(gk * fix));
  }
  const opalg::CpMap t(2, 2, kraus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::stinespring_minimal(t, kTol));
  }
}
BENCHMARK(BM_StinespringMinimal)->Arg(2)->Arg(3)->Arg(4);

void BM_ToCommuting(benchmark::State& state) {
  const opalg::SequentialStrategy s = opalg::chsh_steering_strategy();
  for (auto _ : state) {
    benchmark::DoNotOptimize(opalg::to_commuting(s, kTol));
  }
}
BENCHMARK(BM_ToCommuting);

void BM_SeesawRestart(benchmark::State& state) {
  const opalg::Game g = opalg::chsh_game();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        opalg::seesaw_quantum_value(g, {2, 2}, 1, seed++, kTol));
  }
}
BENCHMARK(BM_SeesawRestart);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "tracelab/channels.hpp"
#include "tracelab/functionals.hpp"
#include "tracelab/linalg.hpp"
#include "tracelab/probes.hpp"
#include "tracelab/rng.hpp"

namespace {

using namespace tcl;

PsdMatrix fixed_psd(std::uint64_t seed, int dim) {
  RandomSpec spec;
  spec.seed = seed;
  spec.dim = dim;
  return random_psd(spec);
}

void BM_Eig(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const PsdMatrix a = fixed_psd(11, dim);
  for (auto _ : state) {
    SpectralDecomposition d = eig(a.hermitian());
    benchmark::DoNotOptimize(d.eigenvalues);
  }
}
BENCHMARK(BM_Eig)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Phi(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const PsdMatrix a = fixed_psd(21, dim);
  const PsdMatrix b = fixed_psd(22, dim);
  const ParamPoint prm(1.5, -0.5, 2.0);
  for (auto _ : state) {
    double v = phi(a, b, prm);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Phi)->Arg(2)->Arg(4)->Arg(8);

void BM_TraceMargin(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const PsdMatrix a1 = fixed_psd(31, dim);
  const PsdMatrix b1 = fixed_psd(32, dim);
  const PsdMatrix a2 = fixed_psd(33, dim);
  const PsdMatrix b2 = fixed_psd(34, dim);
  const ParamPoint prm(1.5, -0.5, 2.0);
  probes::Witness w;
  w.left = {a1.mat(), b1.mat()};
  w.right = {a2.mat(), b2.mat()};
  w.lambda = 0.5;
  for (auto _ : state) {
    double m = probes::trace_margin(prm, probes::Direction::convex, w);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_TraceMargin)->Arg(2)->Arg(4)->Arg(8);

void BM_DpiMargin(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  SplitRng rng(41);
  SplitRng rr = rng.split(0);
  SplitRng sr = rng.split(1);
  PsdMatrix rho = sample_psd(rr, dim, 1e2);
  PsdMatrix sigma = sample_psd(sr, dim, 1e2);
  rho = PsdMatrix(HermitianMatrix(rho.mat() / rho.trace()));
  sigma = PsdMatrix(HermitianMatrix(sigma.mat() / sigma.trace()));
  const channels::QuantumChannel ch = channels::depolarizing_channel(dim, 0.3);
  for (auto _ : state) {
    channels::DpiResult r = channels::dpi_margin(rho, sigma, 1.5, 0.75, ch);
    benchmark::DoNotOptimize(r.margin);
  }
}
BENCHMARK(BM_DpiMargin)->Arg(2)->Arg(3)->Arg(4);

void BM_VariationalCertificate(benchmark::State& state) {
  const PsdMatrix x = fixed_psd(51, 4);
  for (auto _ : state) {
    VariationalResult r =
        trace_power_variational(x, 2.0, VariationalMode::supremum, 50);
    benchmark::DoNotOptimize(r.certificate);
  }
}
BENCHMARK(BM_VariationalCertificate);

}  // namespace

BENCHMARK_MAIN();

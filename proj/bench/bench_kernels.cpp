// Serial vs OpenMP kernels. Outputs are bit-identical; only timing differs.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "swipt/eh_model.hpp"
#include "swipt/kernels.hpp"

namespace {

struct ConvData {
  std::vector<double> coeff;
  std::vector<double> kernel;
  std::vector<double> out;
  swipt::kernels::StridedConvolution conv;
};

ConvData make_conv(std::size_t n) {
  ConvData d;
  d.coeff.assign(n, 1.0 / static_cast<double>(n));
  const std::size_t outputs = 4 * n;
  d.out.assign(outputs, 0.0);
  d.conv.out_stride = 1;
  d.conv.coeff_rate = 4;
  d.conv.coeff = d.coeff;
  d.kernel.resize(outputs + (n - 1) * 4);
  for (std::size_t k = 0; k < d.kernel.size(); ++k) {
    const double t = (static_cast<double>(k) - 0.5 * static_cast<double>(d.kernel.size())) / 200.0;
    d.kernel[k] = std::exp(-0.5 * t * t);
  }
  d.conv.kernel = d.kernel;
  return d;
}

void BM_convolve_serial(benchmark::State& state) {
  ConvData d = make_conv(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    swipt::kernels::convolve_serial(d.conv, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
}

void BM_convolve_parallel(benchmark::State& state) {
  ConvData d = make_conv(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    swipt::kernels::convolve_parallel(d.conv, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  state.counters["threads"] = swipt::kernels::max_threads();
}

std::vector<double> amplitudes(std::size_t n, double top) {
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = top * static_cast<double>(k) / static_cast<double>(n - 1);
  return s;
}

constexpr double kH = 0.0795;

void BM_psi_serial(benchmark::State& state) {
  const auto model = swipt::EhModel::reference_rtd();
  const auto s = amplitudes(static_cast<std::size_t>(state.range(0)), std::sqrt(model.rho_max_watts()) / kH);
  std::vector<double> x(s.size());
  for (auto _ : state) {
    swipt::kernels::output_amplitudes_serial(model, kH, s, x);
    benchmark::DoNotOptimize(x.data());
  }
}

void BM_psi_parallel(benchmark::State& state) {
  const auto model = swipt::EhModel::reference_rtd();
  const auto s = amplitudes(static_cast<std::size_t>(state.range(0)), std::sqrt(model.rho_max_watts()) / kH);
  std::vector<double> x(s.size());
  for (auto _ : state) {
    swipt::kernels::output_amplitudes_parallel(model, kH, s, x);
    benchmark::DoNotOptimize(x.data());
  }
}

}  // namespace

BENCHMARK(BM_convolve_serial)->Arg(501)->Arg(2001);
BENCHMARK(BM_convolve_parallel)->Arg(501)->Arg(2001);
BENCHMARK(BM_psi_serial)->Arg(100000);
BENCHMARK(BM_psi_parallel)->Arg(100000);

BENCHMARK_MAIN();

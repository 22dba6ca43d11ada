// Serial reference vs OpenMP softmax cross-entropy kernels.
#include <benchmark/benchmark.h>

#include "rahgd/core/vector.hpp"
#include "rahgd/kernels/softmax_ce.hpp"
#include "rahgd/problems/dataset.hpp"

namespace {

struct Fixture {
  rahgd::Dataset data;
  rahgd::Vector weights;
  rahgd::Vector w;
  rahgd::Vector v;
  rahgd::Vector out;

  explicit Fixture(std::size_t n)
      : data(rahgd::synth_dataset(n, 64, 10, 0.2, 7)),
        weights(n, 1.0 / static_cast<double>(n)),
        w(10 * 64, 0.01),
        v(10 * 64, 0.5),
        out(10 * 64) {}
};

template <bool Parallel>
void BM_value_grad(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const double val = Parallel ? rahgd::kernels::ce_value_grad(fx.data.view(), fx.weights.span(), fx.w.span(),
                                                                fx.out.span())
                                : rahgd::kernels::serial::ce_value_grad(fx.data.view(), fx.weights.span(),
                                                                        fx.w.span(), fx.out.span());
    benchmark::DoNotOptimize(val);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_hvp(benchmark::State& state) {
  Fixture fx(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if (Parallel) {
      rahgd::kernels::ce_hvp(fx.data.view(), fx.weights.span(), fx.w.span(), fx.v.span(), fx.out.span());
    } else {
      rahgd::kernels::serial::ce_hvp(fx.data.view(), fx.weights.span(), fx.w.span(), fx.v.span(), fx.out.span());
    }
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_value_grad<false>)->Name("value_grad/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_value_grad<true>)->Name("value_grad/parallel")->Arg(1000)->Arg(20000);
BENCHMARK(BM_hvp<false>)->Name("hvp/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_hvp<true>)->Name("hvp/parallel")->Arg(1000)->Arg(20000);

BENCHMARK_MAIN();

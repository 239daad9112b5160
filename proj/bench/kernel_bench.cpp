// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "sl2pke/analysis.hpp"
#include "sl2pke/scheme.hpp"

namespace {

using namespace sl2pke;

struct Count {
  std::uint64_t words = 0, trace_sum = 0;
  void merge(const Count& o) {
    words += o.words;
    trace_sum += o.trace_sum;
  }
};

void visit(Count& acc, const SmallMatrix& m, std::uint64_t) {
  ++acc.words;
  acc.trace_sum += mat_trace(m);
}

template <bool Parallel>
void BM_MatMul(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Modulus mod(static_cast<unsigned>(state.range(1)));
  RandomSource rng = RandomSource::from_seed_hex("b1");
  const ResidueMatrix a = sample_uniform_matrix(dim, mod, rng);
  const ResidueMatrix b = sample_uniform_matrix(dim, mod, rng);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(mat_mul(a, b));
    } else {
      benchmark::DoNotOptimize(mat_mul_serial(a, b));
    }
  }
}

template <bool Parallel>
void BM_Exhaustive(benchmark::State& state) {
  const auto k = static_cast<unsigned>(state.range(0));
  const RandomSource rng = RandomSource::from_seed_hex("0");
  for (auto _ : state) {
    const auto spec = analysis::SampleSpec::exhaustive();
    Count c = Parallel ? analysis::accumulate(k, spec, rng, Count{}, visit)
                       : analysis::accumulate_serial(k, spec, rng, Count{}, visit);
    benchmark::DoNotOptimize(c);
  }
}

template <bool Parallel>
void BM_Sampled(benchmark::State& state) {
  const auto spec = analysis::SampleSpec::sampled(static_cast<std::uint64_t>(state.range(0)));
  const RandomSource rng = RandomSource::from_seed_hex("5eed");
  for (auto _ : state) {
    Count c = Parallel ? analysis::accumulate(40, spec, rng, Count{}, visit)
                       : analysis::accumulate_serial(40, spec, rng, Count{}, visit);
    benchmark::DoNotOptimize(c);
  }
}

}  // namespace

BENCHMARK(BM_MatMul<true>)->Args({8, 4096})->Args({32, 256})->Args({32, 1024});
BENCHMARK(BM_MatMul<false>)->Args({8, 4096})->Args({32, 256})->Args({32, 1024});
BENCHMARK(BM_Exhaustive<true>)->Arg(18)->Arg(22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Exhaustive<false>)->Arg(18)->Arg(22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampled<true>)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampled<false>)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

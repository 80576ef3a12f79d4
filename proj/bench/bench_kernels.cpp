// Serial reference vs OpenMP kernels on benchmark-sized inputs.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "gala/kernels.hpp"
#include "gala/model.hpp"
#include "gala/random.hpp"

using namespace gala;
using kernels::Backend;

namespace {

struct Fixture {
    ClassifierParams params;
    Matrix features;
    std::vector<std::size_t> labels, indices;
    LogMargins margins;

    Fixture(std::size_t K, std::size_t d, std::size_t n)
        : params(init_params(K, d, 0.1, 1)), features(n, d), labels(n), indices(n), margins(LogMargins::neutral(K)) {
        Rng rng(7, Stream::train_samples);
        for (double& v : features.elements()) v = rng.normal();
        for (std::size_t i = 0; i < n; ++i) labels[i] = rng.below(K);
        std::iota(indices.begin(), indices.end(), std::size_t{0});
    }

    kernels::BatchInput batch() const { return {features, labels, indices}; }
};

Backend backend_of(const benchmark::State& state) { return state.range(3) ? Backend::parallel : Backend::serial; }

void BM_ForwardBatch(benchmark::State& state) {
    const Fixture f(state.range(0), state.range(1), state.range(2));
    kernels::BatchForward out;
    for (auto _ : state) {
        kernels::forward_batch(f.params, LossKind::gala, f.margins, f.batch(), out, backend_of(state));
        benchmark::DoNotOptimize(out.losses.data());
    }
}

void BM_BatchGradient(benchmark::State& state) {
    const Fixture f(state.range(0), state.range(1), state.range(2));
    kernels::BatchForward fwd;
    kernels::forward_batch(f.params, LossKind::gala, f.margins, f.batch(), fwd, Backend::serial);
    Matrix wg(f.params.weights.rows(), f.params.weights.cols());
    Vector bg(f.params.weights.rows());
    for (auto _ : state) {
        kernels::batch_gradient(f.batch(), fwd, false, wg, bg, backend_of(state));
        benchmark::DoNotOptimize(wg.elements().data());
    }
}

void BM_PredictProba(benchmark::State& state) {
    const Fixture f(state.range(0), state.range(1), state.range(2));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::predict_proba(f.params, f.features, backend_of(state)));
}

void BM_ColumnL1(benchmark::State& state) {
    const Fixture f(state.range(0), state.range(1), state.range(2));
    const Matrix P = kernels::predict_proba(f.params, f.features, Backend::serial);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::column_l1_norms(P, backend_of(state)));
}

// args: K, d, rows, backend (0 serial, 1 OpenMP)
void shapes(benchmark::internal::Benchmark* b) {
    b->ArgNames({"K", "d", "n", "omp"});
    for (int omp : {0, 1}) {
        b->Args({10, 16, 64, omp});
        b->Args({100, 64, 1024, omp});
    }
}

}  // namespace

BENCHMARK(BM_ForwardBatch)->Apply(shapes);
BENCHMARK(BM_BatchGradient)->Apply(shapes);
BENCHMARK(BM_PredictProba)->Apply(shapes);
BENCHMARK(BM_ColumnL1)->Apply(shapes);

BENCHMARK_MAIN();

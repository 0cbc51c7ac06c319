#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "diracwg/dirac2d.hpp"
#include "diracwg/effective.hpp"
#include "diracwg/geometry.hpp"
#include "diracwg/numerics.hpp"
#include "diracwg/transverse.hpp"

using diracwg::numerics::Complex;
using diracwg::numerics::HermitianMatrix;

namespace {

HermitianMatrix random_hermitian(int n) {
    HermitianMatrix m(n);
    unsigned long long state = 88172645463325252ULL;
    auto rnd = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    };
    for (int i = 0; i < n; ++i) {
        m(i, i) = rnd();
        for (int j = i + 1; j < n; ++j) {
            m(i, j) = Complex(rnd(), rnd());
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

}  // namespace

static void BM_HermitianEigenvalues(benchmark::State& state) {
    const HermitianMatrix m = random_hermitian(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = diracwg::numerics::hermitian_eigenvalues(m, false);
        benchmark::DoNotOptimize(r.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HermitianEigenvalues)->Arg(128)->Arg(256)->Arg(512)->Arg(784)->Complexity();

static void BM_FftForward(benchmark::State& state) {
    std::vector<Complex> x(state.range(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = Complex(std::sin(0.1 * i), std::cos(0.3 * i));
    for (auto _ : state) {
        auto y = diracwg::numerics::fft_forward(x);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftForward)->Arg(256)->Arg(1024)->Arg(1000)->Complexity();

static void BM_GaussLegendre(benchmark::State& state) {
    for (auto _ : state) {
        auto rule = diracwg::numerics::gauss_legendre(static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(rule.nodes.data());
    }
}
BENCHMARK(BM_GaussLegendre)->Arg(64)->Arg(256);

static void BM_TransverseMode(benchmark::State& state) {
    for (auto _ : state) {
        const auto m = diracwg::transverse::mode(4, +1, 0.3);
        benchmark::DoNotOptimize(m.nu);
    }
}
BENCHMARK(BM_TransverseMode);

static void BM_Assemble2D(benchmark::State& state) {
    const auto geom = diracwg::geometry::CurveGeometry::ellipse(1.5, 1.0, 256);
    const int P = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto D = diracwg::dirac2d::assemble(geom, 0.1, 0.0, P, 8, 64);
        benchmark::DoNotOptimize(D.matrix.data().data());
    }
}
BENCHMARK(BM_Assemble2D)->Arg(12)->Arg(24);

static void BM_EffectiveCircle(benchmark::State& state) {
    const auto geom = diracwg::geometry::CurveGeometry::circle(1.0, 256);
    for (auto _ : state) {
        auto op = diracwg::effective::schrodinger_matrix(geom, 48);
        auto eigs = diracwg::effective::effective_eigs(op, 8);
        benchmark::DoNotOptimize(eigs.data());
    }
}
BENCHMARK(BM_EffectiveCircle);

BENCHMARK_MAIN();

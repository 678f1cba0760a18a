#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "rwplab/cs_space.hpp"
#include "rwplab/ensembles.hpp"
#include "rwplab/grassmann.hpp"
#include "rwplab/rng.hpp"
#include "rwplab/solvers.hpp"
#include "rwplab/width_rwp.hpp"

namespace {

Eigen::VectorXd gaussian(int n, std::uint64_t seed) {
    rwplab::CounterRng rng(seed, 0);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.next_gaussian();
    return g;
}

void BM_decode_l1(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m = n / 2;
    const rwplab::CsSpace space = rwplab::CsSpace::l1(n, 3);
    const rwplab::SensingOperator op = rwplab::orthonormalized_gaussian(m, n, 1);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x(1) = 1.0;
    x(5) = -2.0;
    x(n - 2) = 0.5;
    const Eigen::VectorXd y = op.forward(x);
    rwplab::SolverConfig config;
    config.max_iters = 4000;
    for (auto _ : state) {
        auto res = rwplab::decode(rwplab::DecodeProblem{space, op, y, 0.0}, config);
        benchmark::DoNotOptimize(res.objective);
    }
}
BENCHMARK(BM_decode_l1)->Arg(32)->Arg(64)->Arg(128);

void BM_prox_sharp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const rwplab::CsSpace space = rwplab::CsSpace::l1(n, 4);
    const Eigen::VectorXd v = gaussian(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwplab::prox_sharp(space, v, 0.3));
    }
}
BENCHMARK(BM_prox_sharp)->Arg(64)->Arg(512);

void BM_prox_nuclear(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const rwplab::CsSpace space = rwplab::CsSpace::low_rank(n, n, 2);
    const Eigen::VectorXd v = gaussian(n * n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwplab::prox_sharp(space, v, 0.5));
    }
}
BENCHMARK(BM_prox_nuclear)->Arg(8)->Arg(16)->Arg(32);

void BM_width_sample(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const rwplab::CsSpace space = rwplab::CsSpace::l1(n, 1);
    const Eigen::VectorXd g = gaussian(n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwplab::width_sample(space, 0.5, g));
    }
}
BENCHMARK(BM_width_sample)->Arg(64)->Arg(256)->Arg(1024);

void BM_rip_enumerate(benchmark::State& state) {
    const rwplab::SensingOperator op = rwplab::gaussian_iid(12, 16, 5);
    const int j = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwplab::rip_enumerate(op, j).delta_no_squares);
    }
}
BENCHMARK(BM_rip_enumerate)->Arg(2)->Arg(3);

void BM_gap_metric(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const rwplab::Subspace x = rwplab::Subspace::random(n, n / 2, 1);
    const rwplab::Subspace y = rwplab::Subspace::random(n, n / 2, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwplab::gap_metric(x, y));
    }
}
BENCHMARK(BM_gap_metric)->Arg(16)->Arg(64);

void BM_rwp_search(benchmark::State& state) {
    const rwplab::SensingOperator op = rwplab::orthonormalized_gaussian(16, 32, 3);
    const rwplab::CsSpace space = rwplab::CsSpace::l1(32, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rwplab::rwp_search(op, space, rwplab::RwpParams{0.5, 0.2}, 2, 1).min_ratio);
    }
}
BENCHMARK(BM_rwp_search);

}  // namespace

BENCHMARK_MAIN();

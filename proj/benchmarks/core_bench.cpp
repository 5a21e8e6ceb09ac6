#include "simbound/adversary.hpp"
#include "simbound/bounds.hpp"
#include "simbound/mdp.hpp"
#include "simbound/rng.hpp"
#include "simbound/witness.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace simbound;

Mdp random_mdp(int n, int m, double gamma, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Matrix> transitions(m);
    for (int a = 0; a < m; ++a) {
        Matrix t(n, n);
        for (int s = 0; s < n; ++s) {
            for (int s2 = 0; s2 < n; ++s2) t(s, s2) = -std::log(1.0 - rng.uniform());
        }
        transitions[a] = t;
    }
    Matrix rewards(n, m);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m; ++a) rewards(s, a) = rng.uniform();
    }
    return Mdp::renormalized(std::move(transitions), std::move(rewards), gamma);
}

void BM_exact_value(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mdp mdp = random_mdp(n, 4, 0.95, 7);
    const Policy policy = Policy::uniform(n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_value(mdp, policy));
    }
}
BENCHMARK(BM_exact_value)->Arg(10)->Arg(50)->Arg(200);

void BM_measure_misspec(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mdp m = random_mdp(n, 4, 0.95, 7);
    const Mdp m_hat = adversary::perturb_within(m, 0.3, 0.1, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(measure_misspec(m, m_hat));
    }
}
BENCHMARK(BM_measure_misspec)->Arg(10)->Arg(50)->Arg(200);

void BM_overlap_trajectory(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mdp m = random_mdp(n, 3, 0.9, 7);
    const Mdp m_hat = adversary::perturb_within(m, 0.3, 0.1, 11);
    const Policy policy = Policy::uniform(n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(overlap_trajectory(m, m_hat, policy, 0, 50));
    }
}
BENCHMARK(BM_overlap_trajectory)->Arg(10)->Arg(50);

void BM_hill_climb_witness(benchmark::State& state) {
    const auto pair = witness::two_state_witness(0.0, 0.0, 0.9);
    adversary::SearchConfig config;
    config.eps_r = 0.1;
    config.eps_t = 0.2;
    config.iterations = static_cast<int>(state.range(0));
    config.restarts = 4;
    config.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(adversary::hill_climb_max_gap(pair.m, pair.policy, config));
    }
}
BENCHMARK(BM_hill_climb_witness)->Arg(200)->Arg(2000);

void BM_tight_bound_grid(benchmark::State& state) {
    for (auto _ : state) {
        double acc = 0.0;
        for (int i = 0; i <= 100; ++i) {
            for (int j = 0; j <= 100; ++j) {
                acc += bounds::tight_bound(i / 100.0, 2.0 * j / 100.0, 0.97);
            }
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_tight_bound_grid);

}  // namespace

BENCHMARK_MAIN();

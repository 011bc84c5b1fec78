#include <benchmark/benchmark.h>

#include "skewrat/analysis.hpp"
#include "skewrat/cocycle.hpp"
#include "skewrat/genfun.hpp"
#include "skewrat/rat.hpp"
#include "skewrat/visits.hpp"

namespace {

using namespace skewrat;

const mcf::DigitSequence kThrees{{}, std::vector<int>{3}};
const mcf::DigitSequence kTwoThree{{}, std::vector<int>{2, 3}};

void BM_SubstitutionBlocks(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto blocks = cocycle::substitution_blocks(kThrees, level);
        benchmark::DoNotOptimize(blocks);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SubstitutionBlocks)->DenseRange(6, 14, 4)->Complexity();

void BM_FrameAdvance(benchmark::State& state) {
    const int levels = static_cast<int>(state.range(0));
    for (auto _ : state) {
        visits::Frame frame = visits::initial_frame();
        for (int k = 1; k <= levels; ++k) frame = visits::advance(frame, kTwoThree.digit(k));
        benchmark::DoNotOptimize(frame);
    }
}
BENCHMARK(BM_FrameAdvance)->Arg(40)->Arg(80)->Arg(160);

void BM_VisitsDirect(benchmark::State& state) {
    const std::int64_t window = state.range(0);
    for (auto _ : state) {
        auto dist = visits::visits_direct(kThrees, window);
        benchmark::DoNotOptimize(dist);
    }
    state.SetItemsProcessed(state.iterations() * window);
}
BENCHMARK(BM_VisitsDirect)->Range(1 << 10, 1 << 18);

void BM_PolyMultiply(benchmark::State& state) {
    auto frame = visits::frame_at(kThrees, static_cast<int>(state.range(0)));
    auto phi = genfun::temporal_law(frame.v0()).poly();
    for (auto _ : state) {
        auto sq = phi * phi;
        benchmark::DoNotOptimize(sq);
    }
}
BENCHMARK(BM_PolyMultiply)->Arg(12)->Arg(24)->Arg(48);

void BM_PsiExact(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    for (auto _ : state) {
        auto psi = analysis::psi_exact(kThrees, n);
        benchmark::DoNotOptimize(psi);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PsiExact)->Range(256, 8192)->Complexity();

void BM_SimulateSteps(benchmark::State& state) {
    auto seq = rat::alpha_rat_sequence(kThrees, 16);
    for (auto _ : state) {
        auto law = rat::simulate(seq, 16, static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(law);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 16);
}
BENCHMARK(BM_SimulateSteps)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();

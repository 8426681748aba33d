#include "caseq/factorlab.hpp"
#include "caseq/rachsim.hpp"
#include "caseq/seqforge.hpp"
#include "caseq/seqverify.hpp"
#include "caseq/spectra.hpp"

#include <benchmark/benchmark.h>

using namespace caseq;
using namespace caseq::seqforge;
using u64 = std::uint64_t;

namespace {

WaveformConfig cond_b(u64 n) { return {n, 1, Rational(33, 256)}; }

void BM_ExclusiveSearch(benchmark::State& state) {
    auto pf = factorlab::prime_factorize(u64(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(factorlab::exclusive_search_proper(pf, 2));
}
BENCHMARK(BM_ExclusiveSearch)->Arg(288)->Arg(9240)->Arg(30030);

void BM_ClosedFormKappa2(benchmark::State& state) {
    auto pf = factorlab::prime_factorize(u64(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(factorlab::proper_factorization_kappa2(pf));
}
BENCHMARK(BM_ClosedFormKappa2)->Arg(288)->Arg(9240)->Arg(30030);

void BM_MpoDecompose(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(factorlab::mpo_decompose(u64(state.range(0)), true));
}
BENCHMARK(BM_MpoDecompose)->Arg(139)->Arg(839)->Arg(1151);

void BM_BuildAdpma839(benchmark::State& state) {
    auto decomp = Decomposition::from_parts({396, 243, 200});
    int kappa = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_family(FamilyKind::adpma, kappa, cond_b(839), decomp));
}
BENCHMARK(BM_BuildAdpma839)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_GramMatrix(benchmark::State& state) {
    auto fam = build_family(FamilyKind::adpma, 3, cond_b(839), Decomposition::from_parts({396, 243, 200}));
    for (auto _ : state) benchmark::DoNotOptimize(seqverify::gram_max_offdiag(fam.sequences));
}
BENCHMARK(BM_GramMatrix)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
    auto seq = build_zc_sequence(1, 839);
    for (auto _ : state)
        benchmark::DoNotOptimize(spectra::compute_spectrum(seq, cond_b(839), 16.0, std::size_t(state.range(0))));
}
BENCHMARK(BM_Spectrum)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_RaTrials(benchmark::State& state) {
    auto fam = build_family(FamilyKind::adpma, 1, cond_b(839), Decomposition::from_parts({396, 243, 200}));
    rachsim::RaSimConfig cfg;
    cfg.snr_db_list = {0.0};
    cfg.trials = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(rachsim::run_simulation(fam, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_RaTrials)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

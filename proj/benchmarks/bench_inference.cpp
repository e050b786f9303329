#include <lpmln/selftest.hpp>
#include <lpmln/textio.hpp>

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace lpmln;

namespace {
std::string corpus(const std::string& name) {
    std::ifstream      in(std::string(LPMLN_CORPUS_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// n people, soft friendship between neighbours, transitive influence.
std::string chain(int n) {
    std::string text = "#domain person = 1.." + std::to_string(n) + ".\n#var X, Y, Z : person.\n";
    for (int i = 1; i < n; ++i) {
        text += "1 : friend(" + std::to_string(i) + ", " + std::to_string(i + 1) + ").\n";
    }
    text += "alpha : influence(X, Y) :- friend(X, Y).\n"
            "alpha : influence(X, Y) :- influence(X, Z), influence(Z, Y).\n";
    return text;
}

void BM_ParseGround(benchmark::State& state) {
    auto text = chain(static_cast<int>(state.range(0)));
    for (auto _ : state) { benchmark::DoNotOptimize(ground_program(parse_lpmln(text))); }
}
BENCHMARK(BM_ParseGround)->Arg(4)->Arg(8)->Arg(16);

void BM_Distribution(benchmark::State& state) {
    auto   g = ground_program(parse_lpmln(chain(static_cast<int>(state.range(0)))));
    Limits limits;
    limits.jobs = static_cast<unsigned>(state.range(1));
    for (auto _ : state) { benchmark::DoNotOptimize(distribution(g, limits)); }
}
BENCHMARK(BM_Distribution)->UseRealTime()->Args({4, 1})->Args({6, 1})->Args({6, 4})->Args({8, 1})->Args({8, 4});

void BM_FullTable(benchmark::State& state) {
    auto g = ground_program(parse_lpmln(corpus("friends.lpmln")));
    for (auto _ : state) { benchmark::DoNotOptimize(full_table(g)); }
}
BENCHMARK(BM_FullTable);

void BM_RandomStableModels(benchmark::State& state) {
    gen::Rng                   rng(1);
    std::vector<GroundProgram> programs;
    for (int i = 0; i != 64; ++i) {
        programs.push_back(gen::asp_program(rng, static_cast<std::size_t>(state.range(0)), 2 * state.range(0)));
    }
    for (auto _ : state) {
        for (const auto& g : programs) { benchmark::DoNotOptimize(enumerate_stable_models(g)); }
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * programs.size()));
}
BENCHMARK(BM_RandomStableModels)->Arg(8)->Arg(12)->Arg(16);

void BM_LoopFormulas(benchmark::State& state) {
    auto g = ground_program(parse_lpmln(corpus("friends.lpmln")));
    for (auto _ : state) { benchmark::DoNotOptimize(loop_augmented_mln(g)); }
}
BENCHMARK(BM_LoopFormulas);

void BM_DiceMeasure(benchmark::State& state) {
    auto p = parse_plog(corpus("dice.plog"));
    for (auto _ : state) { benchmark::DoNotOptimize(plog_measure(p)); }
}
BENCHMARK(BM_DiceMeasure);

void BM_DiceTranslation(benchmark::State& state) {
    auto p = parse_plog(corpus("dice.plog"));
    for (auto _ : state) { benchmark::DoNotOptimize(distribution(mvpp_to_lpmln(plog_to_mvpp(p)))); }
}
BENCHMARK(BM_DiceTranslation);

void BM_ProbLog(benchmark::State& state) {
    auto p = parse_problog(corpus("coin.problog"));
    for (auto _ : state) { benchmark::DoNotOptimize(problog_distribution(p)); }
}
BENCHMARK(BM_ProbLog);
} // namespace

BENCHMARK_MAIN();

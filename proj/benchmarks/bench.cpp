#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "hybcore/denote.hpp"
#include "hybcore/frontend.hpp"
#include "hybcore/harness.hpp"
#include "hybcore/opsem.hpp"

using namespace hybcore;

namespace {

CompPtr load(const std::string& name) {
    std::ifstream in(std::string(HYBCORE_CORPUS_DIR) + "/" + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void BM_find_boundary(benchmark::State& state) {
    EvalParams prms;
    TimeFun h{parse("ret line(0, t)")->val, "t", {}};
    auto pred = [](const RtVal& x) { return x.r <= 1.0; };
    for (auto _ : state) {
        Boundary b = find_boundary(h, pred, prms);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_find_boundary);

void BM_parse_ball(benchmark::State& state) {
    std::ifstream in(std::string(HYBCORE_CORPUS_DIR) + "/ball.hc");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    for (auto _ : state) {
        CompPtr p = parse(text);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_parse_ball);

void BM_bs_duration_ball(benchmark::State& state) {
    EvalParams prms;
    prms.max_unfold = static_cast<int>(state.range(0));
    CompPtr ball = load("ball.hc");
    for (auto _ : state) {
        BigStepOutcome o = bs_duration(ball, prms);
        benchmark::DoNotOptimize(o);
    }
}
BENCHMARK(BM_bs_duration_ball)->Arg(16)->Arg(60)->Arg(240);

void BM_denote_h_ball_sample(benchmark::State& state) {
    EvalParams prms;
    prms.max_unfold = 60;
    CompPtr ball = load("ball.hc");
    Grid grid{0.0, 3.0, 0.1};
    for (auto _ : state) {
        auto rows = sample(ball, grid, prms);
        benchmark::DoNotOptimize(rows);
    }
}
BENCHMARK(BM_denote_h_ball_sample);

void BM_evo_eval_taxonomy_b(benchmark::State& state) {
    EvalParams prms;
    CompPtr p = load("taxonomy_b.hc");
    for (auto _ : state) {
        Evaluator ev(prms);
        EvoResult r = ev.evo_eval(p, 2.5);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_evo_eval_taxonomy_b);

}  // namespace

BENCHMARK_MAIN();

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "hybcore/denote.hpp"
#include "hybcore/frontend.hpp"
#include "hybcore/opsem.hpp"

using namespace hybcore;

namespace {

CompPtr load(const std::string& name) {
    std::ifstream in(std::string(HYBCORE_CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("duration denotations") {
    EvalParams prms;
    QRes<RtVal> u = denote_q(parse("ret *"), prms)({});
    CHECK(u.is_done());
    CHECK(u.dur == 0.0);
    CHECK(u.value->kind == RtKind::Unit);

    QRes<RtVal> e = denote_q(load("taxonomy_e.hc"), prms)({});
    CHECK_FALSE(e.is_done());
    CHECK(std::abs(e.dur - 2.0) <= 1e-9);

    QRes<RtVal> l = denote_q(parse("evolve x = t. line(0, t) & x <= 1"), prms)({});
    CHECK(l.is_done());
    CHECK(l.dur == 1.0);
    CHECK(l.value->r == 1.0);
}

TEST_CASE("open judgements evaluate under explicit environments") {
    EvalParams prms;
    Env env{{"x", RtVal::real(2)}};
    QRes<RtVal> q = denote_q(parse("ret x + 1"), prms)(env);
    CHECK(q.is_done());
    CHECK(q.value->r == 3.0);

    // while z := ret x & z > 0 { ret z - 1 } under x = 2
    QRes<RtVal> loop =
        denote_q(parse("while z := ret x & z > 0 { ret z - 1 }"), prms)(env);
    CHECK(loop.is_done());
    CHECK(loop.dur == 0.0);
    CHECK(loop.value->r == 0.0);

    Traj<RtVal> T = denote_h(parse("evolve y = t. x + t & y <= 3"), prms)(env);
    CHECK(T.tag == TrajTag::cc);
    // x + t reaches 3 at t = 1; the boundary in t is fuzzy by the rounding
    // of the sum, so only up to tolerance
    CHECK(std::abs(T.dur - 1.0) <= 1e-9);
}

TEST_CASE("evolution denotations") {
    EvalParams prms;
    Traj<RtVal> seven = denote_h(parse("evolve x = t. t & x <= 7"), prms)({});
    CHECK(seven.tag == TrajTag::cc);
    CHECK(seven.dur == 7.0);
    CHECK(eval_traj(seven, 3.25).value->r == 3.25);

    Traj<RtVal> c = denote_h(load("taxonomy_c.hc"), prms)({});
    CHECK(c.tag == TrajTag::od);
    CHECK(c.dur == 0.0);

    EvalParams bp = prms;
    bp.max_unfold = 60;
    Traj<RtVal> ball = denote_h(load("ball.hc"), bp)({});
    CHECK(ball.tag == TrajTag::od);
    CHECK(ball.truncated);
    CHECK(std::abs(ball.dur - 3.0304576336566322) <= 1e-3);
    auto v0 = eval_traj(ball, 0.5);
    REQUIRE(v0.value);
    CHECK(v0.value->first().r == doctest::Approx(3.775).epsilon(1e-12));
}

TEST_CASE("the denotations agree with the operational semantics") {
    EvalParams prms;
    prms.max_unfold = 512;
    for (const char* name : {"taxonomy_a.hc", "taxonomy_b.hc", "taxonomy_c.hc",
                             "taxonomy_e.hc", "line_leq.hc", "line_lt.hc", "wait_ret.hc"}) {
        CAPTURE(name);
        CompPtr p = load(name);
        Evaluator ev(prms);
        BigStepOutcome bs = ev.bs_duration(p);
        QRes<RtVal> q = denote_q(p, prms)({});
        CHECK(bs.converged == q.is_done());
        if (std::isinf(bs.dur) || std::isinf(q.dur)) {
            CHECK(bs.dur == q.dur);
        } else {
            CHECK(std::abs(bs.dur - q.dur) <= 1e-9);
        }
        if (bs.converged) CHECK(rt_close(eval_value({}, bs.value), *q.value, 1e-9));

        Traj<RtVal> T = denote_h(p, prms)({});
        for (double t = 0.0; t <= 2.0; t += 0.25) {
            auto dv = eval_traj(T, t);
            if (dv.truncated_gap) continue;
            EvoResult ov = ev.evo_eval(p, t);
            CHECK(dv.value.has_value() == ov.defined());
            if (dv.value && ov.defined()) CHECK(rt_close(*dv.value, *ov.value, 1e-9));
        }
    }
}

TEST_CASE("H and Q denotations agree at closed convergent endpoints") {
    EvalParams prms;
    prms.max_unfold = 512;
    for (const char* name : {"taxonomy_a.hc", "taxonomy_b.hc", "taxonomy_c.hc",
                             "taxonomy_d.hc", "taxonomy_e.hc", "line_leq.hc", "line_lt.hc",
                             "wait_ret.hc", "sec6_diverge.hc"}) {
        CAPTURE(name);
        CompPtr p = load(name);
        QRes<RtVal> q = denote_q(p, prms)({});
        Traj<RtVal> T = denote_h(p, prms)({});
        CHECK((T.tag == TrajTag::cc) == q.is_done());
        if (T.tag == TrajTag::cc) {
            CHECK(std::abs(T.dur - q.dur) <= 1e-9);
            auto end = eval_traj(T, T.dur);
            REQUIRE(end.value);
            CHECK(rt_close(*end.value, *q.value, 1e-9));
        }
    }
}

TEST_CASE("denotational divergence carries the exhausted flag honestly") {
    // A loop that neither settles nor clearly diverges within a tiny budget.
    EvalParams prms;
    prms.max_unfold = 24;
    prms.zeno_window = 16;
    CompPtr p = parse("while x := 1 & true { wait(x); x := x * 0.9 }");
    QRes<RtVal> q = denote_q(p, prms)({});
    CHECK_FALSE(q.is_done());
    // geometric with ratio 0.9 under a 24-step budget: inconclusive
    CHECK(q.exhausted);
}

TEST_CASE("evaluation past the materialized prefix reports the gap") {
    EvalParams prms;
    prms.max_unfold = 64;
    Traj<RtVal> T = denote_h(load("taxonomy_d.hc"), prms)({});
    CHECK(T.tag == TrajTag::od);
    CHECK(std::isinf(T.dur));
    CHECK(T.truncated);
    auto inside = eval_traj(T, 1.5);
    CHECK(inside.value.has_value());
    auto beyond = eval_traj(T, T.materialized() + 10.0);
    CHECK_FALSE(beyond.value.has_value());
    CHECK(beyond.truncated_gap);
}

TEST_CASE("segment lengths add up to the duration on finite trajectories") {
    EvalParams prms;
    prms.max_unfold = 256;
    for (const char* name :
         {"taxonomy_a.hc", "taxonomy_b.hc", "line_leq.hc", "wait_ret.hc"}) {
        CAPTURE(name);
        Traj<RtVal> T = denote_h(load(name), prms)({});
        REQUIRE(!T.truncated);
        CHECK(std::abs(T.materialized() - T.dur) <= 1e-12);
    }
}

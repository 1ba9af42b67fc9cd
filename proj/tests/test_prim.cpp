#include <doctest.h>

#include <cmath>
#include <random>

#include "hybcore/frontend.hpp"
#include "hybcore/prim.hpp"

using namespace hybcore;

namespace {

ValuePtr pv(const std::string& s) { return parse("ret " + s)->val; }

TimeFun clock_fun() { return TimeFun{v_var("t"), "t", {}}; }

}  // namespace

TEST_CASE("eval_value basics") {
    Env env{{"x", RtVal::real(5)}};
    CHECK(eval_value(env, pv("x - 1")).r == 4.0);
    CHECK(eval_value({}, pv("ball_u(5, 0, 0.5)")).r == 3.775);
    CHECK(eval_value({}, pv("line(0, 1)")).r == 1.0);
    CHECK(eval_value({}, pv("(1, true)")).kind == RtKind::Pair);
    CHECK_THROWS_AS(eval_value({}, pv("1 / 0")), RuntimeFault);
    CHECK_THROWS_AS(eval_value({}, pv("y")), RuntimeFault);
}

TEST_CASE("builtin solution symbols") {
    CHECK(eval_value({}, pv("ball_v(5, 0, 1)")).r == -9.8);
    CHECK(eval_value({}, pv("accel_v(0, 0, 3)")).r == 3.0);
    CHECK(eval_value({}, pv("brake_v(0, 5, 2)")).r == 3.0);
    CHECK(eval_value({}, pv("round(2.4)")).n == 2);
    CHECK(eval_value({}, pv("round(2.5)")).n == 3);  // ties upward
    CHECK(eval_value({}, pv("round(0 - 1.2)")).n == 0);
    CHECK(eval_value({}, pv("nat2real(round(2.4))")).r == 2.0);
    CHECK(eval_value({}, pv("signal(0, 0)")).r == 0.0);
    CHECK(eval_value({}, pv("fst((1, 2))")).r == 1.0);
    CHECK(eval_value({}, pv("snd((1, (2, 3)))")).kind == RtKind::Pair);
}

TEST_CASE("find_boundary threshold cases") {
    EvalParams prms;
    auto leq1 = [](const RtVal& x) { return x.r <= 1.0; };
    auto lt1 = [](const RtVal& x) { return x.r < 1.0; };

    Boundary b1 = find_boundary(clock_fun(), leq1, prms);
    CHECK(b1.d == 1.0);
    CHECK(b1.closed);

    Boundary b2 = find_boundary(clock_fun(), lt1, prms);
    CHECK(b2.d == 1.0);
    CHECK_FALSE(b2.closed);

    Boundary b3 = find_boundary(clock_fun(), [](const RtVal&) { return true; }, prms);
    CHECK(std::isinf(b3.d));
    CHECK_FALSE(b3.closed);

    Boundary b4 = find_boundary(clock_fun(), [](const RtVal& x) { return x.r <= 0.0; }, prms);
    CHECK(b4.d == 0.0);
    CHECK(b4.closed);

    Boundary b5 = find_boundary(clock_fun(), [](const RtVal&) { return false; }, prms);
    CHECK(b5.d == 0.0);
    CHECK_FALSE(b5.closed);
}

TEST_CASE("find_boundary via guard terms") {
    EvalParams prms;
    // (x := t. line(0,t) & x <= 1) has boundary (1, closed)
    TimeFun h{pv("line(0, t)"), "t", {}};
    Boundary b = find_boundary(h, pv("x <= 1"), "x", {}, prms);
    CHECK(b.d == 1.0);
    CHECK(b.closed);
}

TEST_CASE("boundary against closed-form roots") {
    EvalParams prms;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        double u0 = 0.5 + (rng() % 1000) / 100.0;
        Env env{{"u", RtVal::real(u0)}, {"v", RtVal::real(0)}};
        TimeFun h{pv("ball_u(u, v, t)"), "t", env};
        Boundary b = find_boundary(
            h, [](const RtVal& x) { return x.r >= 0.0; }, prms);
        double root = std::sqrt(u0 / 4.9);
        CHECK(b.closed);
        CHECK(std::abs(b.d - root) <= prms.boundary_tol);
    }
}

TEST_CASE("boundary monotonicity in the grid step") {
    EvalParams coarse;
    coarse.grid_step = 1e-2;
    EvalParams fine = coarse;
    fine.grid_step = 5e-3;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        double c = (rng() % 300) / 100.0;
        auto pred = [c](const RtVal& x) { return x.r <= c; };
        Boundary bc = find_boundary(clock_fun(), pred, coarse);
        Boundary bf = find_boundary(clock_fun(), pred, fine);
        CHECK(bf.d <= bc.d + coarse.grid_step);
    }
}

TEST_CASE("solution symbols satisfy their equations") {
    std::mt19937_64 rng(3);
    auto deriv = [](auto f, double t) {
        const double h = 1e-6;
        return (f(t + h) - f(t - h)) / (2 * h);
    };
    for (int i = 0; i < 100; ++i) {
        double u = (rng() % 100) / 10.0, v = (rng() % 100) / 10.0 - 5.0,
               t = 0.1 + (rng() % 50) / 10.0;
        Env env{{"u", RtVal::real(u)}, {"v", RtVal::real(v)}};
        auto at = [&](const char* sym, double tt) {
            Env e = env;
            e["t"] = RtVal::real(tt);
            return eval_value(e, pv(std::string(sym) + "(u, v, t)")).r;
        };
        // d ball_u / dt = ball_v, d accel_u / dt = accel_v, d brake_u / dt = brake_v
        CHECK(std::abs(deriv([&](double s) { return at("ball_u", s); }, t) - at("ball_v", t)) <=
              1e-6);
        CHECK(std::abs(deriv([&](double s) { return at("accel_u", s); }, t) -
                       at("accel_v", t)) <= 1e-6);
        CHECK(std::abs(deriv([&](double s) { return at("brake_u", s); }, t) -
                       at("brake_v", t)) <= 1e-6);
        // d accel_v / dt = 1, d ball_v / dt = -9.8
        CHECK(std::abs(deriv([&](double s) { return at("accel_v", s); }, t) - 1.0) <= 1e-5);
        CHECK(std::abs(deriv([&](double s) { return at("ball_v", s); }, t) + 9.8) <= 1e-4);
    }
}

TEST_CASE("rt_to_term embeds values as closed literals") {
    RtVal v = RtVal::pair(RtVal::real(1.5), RtVal::pair(RtVal::boolean(true), RtVal::nat(3)));
    CHECK(rt_eq(eval_value({}, rt_to_term(v)), v));
    CHECK(rt_eq(eval_value({}, rt_to_term(RtVal::unit())), RtVal::unit()));
}

TEST_CASE("rt_close tolerances") {
    CHECK(rt_close(RtVal::real(1.0), RtVal::real(1.0 + 1e-10), 1e-9));
    CHECK_FALSE(rt_close(RtVal::real(1.0), RtVal::real(1.1), 1e-9));
    CHECK_FALSE(rt_close(RtVal::real(1.0), RtVal::nat(1), 1e-9));
    CHECK(rt_close(RtVal::pair(RtVal::real(1), RtVal::real(2)),
                   RtVal::pair(RtVal::real(1), RtVal::real(2)), 0));
}

#include <doctest.h>

#include <cmath>

#include "hybcore/hybrid_monad.hpp"

using namespace hybcore;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// A single-segment closed trajectory with value fn over [0, d].
Traj<double> cc_line(double d) {
    Traj<double> T;
    T.tag = TrajTag::cc;
    T.dur = d;
    T.segments.push_back({d, [](double s) { return s; }});
    return T;
}

Traj<double> od_infinite_line() {
    Traj<double> T;
    T.tag = TrajTag::od;
    T.dur = kInf;
    T.segments.push_back({kInf, [](double s) { return s; }});
    return T;
}

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("h_unit is an instantaneous point") {
    Traj<int> T = h_unit(5);
    CHECK(T.tag == TrajTag::cc);
    CHECK(T.dur == 0.0);
    auto r = eval_traj(T, 0.0);
    REQUIRE(r.value);
    CHECK(*r.value == 5);
    CHECK_FALSE(eval_traj(T, 0.5).value);
}

TEST_CASE("eval_traj domains") {
    CHECK_FALSE(eval_traj(h_bottom<int>(), 0.0).value);  // empty domain

    Traj<double> T = cc_line(1.0);
    CHECK(*eval_traj(T, 0.0).value == 0.0);
    CHECK(*eval_traj(T, 0.5).value == 0.5);
    CHECK(*eval_traj(T, 1.0).value == 1.0);  // closed endpoint
    CHECK_FALSE(eval_traj(T, 1.0 + 1e-12).value);

    Traj<double> O = od_infinite_line();
    CHECK(*eval_traj(O, 1e5).value == 1e5);

    // open trajectories exclude their duration
    Traj<double> od1 = cc_line(1.0);
    od1.tag = TrajTag::od;
    CHECK(*eval_traj(od1, 0.999).value == 0.999);
    CHECK_FALSE(eval_traj(od1, 1.0).value);
}

TEST_CASE("h_bind unit laws") {
    EvalParams prms;
    prms.seq_check_step = 0.05;

    // left unit: bind f over a point is f at the point
    auto f = [](double x) {
        Traj<double> T = cc_line(0.5);
        T.segments[0].at = [x](double s) { return x + s; };
        return T;
    };
    Traj<double> L = h_bind(f, h_unit(2.0), prms);
    CHECK(L.tag == TrajTag::cc);
    CHECK(L.dur == 0.5);
    CHECK(close(*eval_traj(L, 0.25).value, 2.25));

    // right unit: bind the unit over a trajectory preserves it pointwise
    Traj<double> T = cc_line(1.0);
    Traj<double> R = h_bind([](double x) { return h_unit(x); }, T, prms);
    CHECK(R.tag == TrajTag::cc);
    CHECK(R.dur == 1.0);
    for (double t : {0.0, 0.3, 0.7, 1.0}) CHECK(close(*eval_traj(R, t).value, t));
}

TEST_CASE("h_bind concatenates closed convergent runs") {
    EvalParams prms;
    prms.seq_check_step = 0.05;
    // T = line on [0,1]; f shifts by 1 for another unit
    auto f = [](double x) {
        Traj<double> T = cc_line(1.0);
        T.segments[0].at = [x](double s) { return x + s; };
        return T;
    };
    Traj<double> R = h_bind(f, cc_line(1.0), prms);
    CHECK(R.tag == TrajTag::cc);
    CHECK(R.dur == 2.0);
    // the prefix shows f at time zero along the run
    CHECK(close(*eval_traj(R, 0.5).value, 0.5));
    CHECK(close(*eval_traj(R, 1.5).value, 1.5));
    CHECK(close(*eval_traj(R, 2.0).value, 2.0));
}

TEST_CASE("h_bind divergence cuts") {
    EvalParams prms;
    prms.seq_check_step = 0.05;

    // f dead strictly above 1: D = [0,1], closed divergence at 1
    auto f_gt = [](double x) { return x > 1.0 ? h_bottom<double>() : h_unit(x); };
    Traj<double> C = h_bind(f_gt, od_infinite_line(), prms);
    CHECK(C.tag == TrajTag::cd);
    CHECK(C.dur == 1.0);
    CHECK(close(*eval_traj(C, 1.0).value, 1.0));

    // f dead from 1 on: D = [0,1), open divergence at 1
    auto f_geq = [](double x) { return x >= 1.0 ? h_bottom<double>() : h_unit(x); };
    Traj<double> O = h_bind(f_geq, od_infinite_line(), prms);
    CHECK(O.tag == TrajTag::od);
    CHECK(O.dur == 1.0);
    CHECK(close(*eval_traj(O, 0.5).value, 0.5));
    CHECK_FALSE(eval_traj(O, 1.0).value);

    // f dead at 0: the whole composition is empty
    auto f_dead = [](double) { return h_bottom<double>(); };
    CHECK(h_bind(f_dead, cc_line(1.0), prms).is_bottom());
}

TEST_CASE("kappa flags exactly the closed convergent endpoint") {
    Traj<double> T = cc_line(1.0);
    auto K = kappa(T);
    CHECK(eval_traj(K, 0.0).value->second == false);
    CHECK(eval_traj(K, 0.5).value->second == false);
    CHECK(eval_traj(K, 1.0).value->second == true);
    CHECK(eval_traj(K, 1.0).value->first == 1.0);

    Traj<double> O = od_infinite_line();
    auto KO = kappa(O);
    for (double t : {0.0, 1.0, 7.5}) CHECK(eval_traj(KO, t).value->second == false);

    auto KP = kappa(h_unit(3.0));
    CHECK(eval_traj(KP, 0.0).value->second == true);  // endpoint at t = 0 = dur
}

TEST_CASE("h_iter examples") {
    EvalParams prms;
    prms.seq_check_step = 0.05;
    using E = Either<double, double>;

    // immediate exit
    auto f0 = [](double x) { return h_unit(E::inl(x)); };
    Traj<double> T0 = h_iter<double>(f0, 7.0, prms);
    CHECK(T0.tag == TrajTag::cc);
    CHECK(T0.dur == 0.0);
    CHECK(*eval_traj(T0, 0.0).value == 7.0);

    // unit-length arcs counting down from 5: five unfoldings then exit
    auto fb = [](double x) -> Traj<E> {
        if (x <= 0.0) return h_unit(E::inl(x));
        Traj<E> T;
        T.tag = TrajTag::cc;
        T.dur = 1.0;
        T.segments.push_back({1.0, [x](double s) {
                                  return s == 1.0 ? E::inr(x - 1.0) : E::inl(x - 1.0 + s);
                              }});
        return T;
    };
    Traj<double> Tb = h_iter<double>(fb, 5.0, prms);
    CHECK(Tb.tag == TrajTag::cc);
    CHECK(Tb.dur == 5.0);
    CHECK(*eval_traj(Tb, 5.0).value == 0.0);

    // Zeno arcs: wait x then halve; od at the limit 2, truncated
    auto fz = [](double x) -> Traj<E> {
        Traj<E> T;
        T.tag = TrajTag::cc;
        T.dur = x;
        T.segments.push_back({x, [x](double s) {
                                  return s == x ? E::inr(x / 2.0) : E::inl(x);
                              }});
        return T;
    };
    Traj<double> Tz = h_iter<double>(fz, 1.0, prms);
    CHECK(Tz.tag == TrajTag::od);
    CHECK(Tz.truncated);
    CHECK(Tz.trunc_kind == TruncationKind::zeno);
    CHECK(close(Tz.dur, 2.0, 1e-9));

    // divergent iterate: tag carries over
    auto fd = [](double) {
        Traj<E> T;
        T.tag = TrajTag::od;
        T.dur = 1.0;
        T.segments.push_back({1.0, [](double s) { return E::inl(s); }});
        return T;
    };
    Traj<double> Td = h_iter<double>(fd, 0.0, prms);
    CHECK(Td.tag == TrajTag::od);
    CHECK(Td.dur == 1.0);
    CHECK_FALSE(Td.truncated);
}

TEST_CASE("h_iter rejects off-endpoint continuations") {
    EvalParams prms;
    using E = Either<double, double>;
    auto bad = [](double x) {
        Traj<E> T;
        T.tag = TrajTag::cc;
        T.dur = 1.0;
        T.segments.push_back({1.0, [x](double) { return E::inr(x); }});
        return T;
    };
    CHECK_THROWS_AS(h_iter<double>(bad, 0.0, prms), ShapeViolation);
}

TEST_CASE("h_iter satisfies the fixpoint law on sample grids") {
    EvalParams prms;
    prms.seq_check_step = 0.05;
    using E = Either<double, double>;
    auto fb = [](double x) -> Traj<E> {
        if (x <= 0.0) return h_unit(E::inl(x));
        Traj<E> T;
        T.tag = TrajTag::cc;
        T.dur = 0.5;
        T.segments.push_back({0.5, [x](double s) {
                                  return s == 0.5 ? E::inr(x - 0.5) : E::inl(x - 0.5 + s);
                              }});
        return T;
    };
    Traj<double> lhs = h_iter<double>(fb, 2.0, prms);
    auto g = [&](const E& e) {
        return e.is_inl ? h_unit(e.l) : h_iter<double>(fb, e.r, prms);
    };
    Traj<double> rhs = h_bind(g, fb(2.0), prms);
    CHECK(lhs.tag == rhs.tag);
    CHECK(close(lhs.dur, rhs.dur));
    for (double t = 0.0; t <= 2.0; t += 0.1) {
        auto a = eval_traj(lhs, t), b = eval_traj(rhs, t);
        REQUIRE(a.value.has_value() == b.value.has_value());
        if (a.value) CHECK(close(*a.value, *b.value));
    }
}

TEST_CASE("approximant correspondence for Zeno iterations") {
    // For t below the limit duration, finitely many unfoldings already
    // cover t and agree with the full iteration pointwise.
    EvalParams prms;
    using E = Either<double, double>;
    auto fz = [](double x) -> Traj<E> {
        Traj<E> T;
        T.tag = TrajTag::cc;
        T.dur = x;
        T.segments.push_back({x, [x](double s) {
                                  return s == x ? E::inr(x / 2.0) : E::inl(x);
                              }});
        return T;
    };
    Traj<double> full = h_iter<double>(fz, 1.0, prms);
    for (double t : {0.3, 0.9, 1.4, 1.9}) {
        REQUIRE(t < full.dur);
        double covered = 0.0, x = 1.0;
        int n = 0;
        while (covered + x <= t && n < 100) {
            covered += x;
            x /= 2.0;
            ++n;
        }
        // value inside unfolding n equals the full trajectory's value
        auto v = eval_traj(full, t);
        REQUIRE(v.value);
        CHECK(close(*v.value, x));
    }
}

TEST_CASE("defined-time sets are downward closed") {
    EvalParams prms;
    prms.seq_check_step = 0.05;
    using E = Either<double, double>;
    auto fz = [](double x) -> Traj<E> {
        Traj<E> T;
        T.tag = TrajTag::cc;
        T.dur = x;
        T.segments.push_back({x, [x](double s) {
                                  return s == x ? E::inr(x / 2.0) : E::inl(x);
                              }});
        return T;
    };
    std::vector<Traj<double>> trajs;
    trajs.push_back(h_iter<double>(fz, 1.0, prms));
    trajs.push_back(cc_line(1.0));
    trajs.push_back(h_bind([](double x) { return x >= 1.0 ? h_bottom<double>() : h_unit(x); },
                           od_infinite_line(), prms));
    for (const auto& T : trajs) {
        bool seen_undefined = false;
        for (double t = 0.0; t <= 3.0; t += 0.05) {
            bool defined = eval_traj(T, t).value.has_value();
            if (seen_undefined) CHECK_FALSE(defined);
            if (!defined) seen_undefined = true;
        }
    }
}

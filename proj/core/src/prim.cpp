#include "hybcore/prim.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>

namespace hybcore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// RtVal helpers
// ---------------------------------------------------------------------------

bool rt_eq(const RtVal& a, const RtVal& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case RtKind::Unit: return true;
        case RtKind::Bool: return a.b == b.b;
        case RtKind::Nat: return a.n == b.n;
        case RtKind::Real: return a.r == b.r;
        case RtKind::Pair: return rt_eq(a.first(), b.first()) && rt_eq(a.second(), b.second());
    }
    return false;
}

bool rt_close(const RtVal& a, const RtVal& b, double tol) {
    if (a.kind != b.kind) return false;
    if (a.kind == RtKind::Real) return std::abs(a.r - b.r) <= tol;
    if (a.kind == RtKind::Pair)
        return rt_close(a.first(), b.first(), tol) && rt_close(a.second(), b.second(), tol);
    return rt_eq(a, b);
}

std::string format_real(double d) {
    if (d == kInf) return "inf";
    if (d == -kInf) return "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

std::string rt_str(const RtVal& v) {
    switch (v.kind) {
        case RtKind::Unit: return "*";
        case RtKind::Bool: return v.b ? "true" : "false";
        case RtKind::Nat: return std::to_string(v.n);
        case RtKind::Real: return format_real(v.r);
        case RtKind::Pair: return "(" + rt_str(v.first()) + ", " + rt_str(v.second()) + ")";
    }
    return "?";
}

ValuePtr rt_to_term(const RtVal& v) {
    switch (v.kind) {
        case RtKind::Unit: return v_star();
        case RtKind::Bool: return v_bool(v.b);
        case RtKind::Nat: return v_nat(v.n);
        case RtKind::Real: return v_real(v.r);
        case RtKind::Pair: return v_pair(rt_to_term(v.first()), rt_to_term(v.second()));
    }
    return v_star();
}

// ---------------------------------------------------------------------------
// Value evaluation
// ---------------------------------------------------------------------------

RtVal eval_value(const Env& env, const ValuePtr& v) {
    switch (v->kind) {
        case ValueKind::Var: {
            auto it = env.find(v->name);
            if (it == env.end()) throw RuntimeFault("unbound variable: " + v->name);
            return it->second;
        }
        case ValueKind::Star: return RtVal::unit();
        case ValueKind::True: return RtVal::boolean(true);
        case ValueKind::False: return RtVal::boolean(false);
        case ValueKind::RealLit: return RtVal::real(v->real_val);
        case ValueKind::NatLit: return RtVal::nat(v->nat_val);
        case ValueKind::Pair:
            return RtVal::pair(eval_value(env, v->a), eval_value(env, v->b));
        case ValueKind::SigApp: {
            const SigEntry* entry = builtin_signature().find(v->name);
            if (!entry) throw RuntimeFault("unknown signature symbol: " + v->name);
            return entry->eval(eval_value(env, v->a));
        }
    }
    throw RuntimeFault("malformed value term");
}

RtVal TimeFun::at(double t) const {
    Env e = env;
    e[binder] = RtVal::real(t);
    return eval_value(e, term);
}

// ---------------------------------------------------------------------------
// Builtin signature
// ---------------------------------------------------------------------------

void Signature::add_mono(const std::string& name, Ty arg, Ty result,
                         std::function<RtVal(const RtVal&)> eval) {
    SigEntry e;
    e.type_of = [arg = std::move(arg), result = std::move(result)](const Ty& a)
        -> std::optional<Ty> {
        if (a == arg) return result;
        return std::nullopt;
    };
    e.eval = std::move(eval);
    add(name, std::move(e));
}

namespace {

double want_real(const RtVal& v) {
    if (v.kind != RtKind::Real) throw RuntimeFault("expected real argument");
    return v.r;
}

std::pair<double, double> want_real2(const RtVal& v) {
    if (v.kind != RtKind::Pair) throw RuntimeFault("expected pair argument");
    return {want_real(v.first()), want_real(v.second())};
}

// ODE symbols take (x0, (v0, t)) through the uncurried application syntax.
std::tuple<double, double, double> want_real3(const RtVal& v) {
    if (v.kind != RtKind::Pair || v.second().kind != RtKind::Pair)
        throw RuntimeFault("expected triple argument");
    return {want_real(v.first()), want_real(v.second().first()),
            want_real(v.second().second())};
}

Signature make_builtins() {
    Signature sig;
    const Ty R = Ty::real();
    const Ty N = Ty::nat();
    const Ty B = Ty::boolean();
    const Ty RR = Ty::prod(R, R);
    const Ty BB = Ty::prod(B, B);
    const Ty R3 = Ty::prod(R, Ty::prod(R, R));

    auto real2 = [&](const std::string& name, double (*fn)(double, double)) {
        sig.add_mono(name, RR, R, [fn](const RtVal& v) {
            auto [a, b] = want_real2(v);
            return RtVal::real(fn(a, b));
        });
    };
    real2("add", [](double a, double b) { return a + b; });
    real2("sub", [](double a, double b) { return a - b; });
    real2("mul", [](double a, double b) { return a * b; });
    sig.add_mono("div", RR, R, [](const RtVal& v) {
        auto [a, b] = want_real2(v);
        if (b == 0.0) throw RuntimeFault("division by zero");
        return RtVal::real(a / b);
    });
    sig.add_mono("neg", R, R, [](const RtVal& v) { return RtVal::real(-want_real(v)); });

    auto cmp = [&](const std::string& name, bool (*fn)(double, double)) {
        sig.add_mono(name, RR, B, [fn](const RtVal& v) {
            auto [a, b] = want_real2(v);
            return RtVal::boolean(fn(a, b));
        });
    };
    cmp("lt", [](double a, double b) { return a < b; });
    cmp("leq", [](double a, double b) { return a <= b; });
    cmp("gt", [](double a, double b) { return a > b; });
    cmp("geq", [](double a, double b) { return a >= b; });
    cmp("eq", [](double a, double b) { return a == b; });
    cmp("neq", [](double a, double b) { return a != b; });

    sig.add_mono("and", BB, B, [](const RtVal& v) {
        return RtVal::boolean(v.first().b && v.second().b);
    });
    sig.add_mono("or", BB, B, [](const RtVal& v) {
        return RtVal::boolean(v.first().b || v.second().b);
    });
    sig.add_mono("not", B, B, [](const RtVal& v) { return RtVal::boolean(!v.b); });

    // Component projections: typed structurally over any product.
    SigEntry fst_e;
    fst_e.type_of = [](const Ty& a) -> std::optional<Ty> {
        if (a.is_prod()) return a.left();
        return std::nullopt;
    };
    fst_e.eval = [](const RtVal& v) {
        if (v.kind != RtKind::Pair) throw RuntimeFault("fst of non-pair");
        return v.first();
    };
    sig.add("fst", std::move(fst_e));
    SigEntry snd_e;
    snd_e.type_of = [](const Ty& a) -> std::optional<Ty> {
        if (a.is_prod()) return a.right();
        return std::nullopt;
    };
    snd_e.eval = [](const RtVal& v) {
        if (v.kind != RtKind::Pair) throw RuntimeFault("snd of non-pair");
        return v.second();
    };
    sig.add("snd", std::move(snd_e));

    // Nearest natural, ties upward, negatives clamp to zero.
    sig.add_mono("round", R, N, [](const RtVal& v) {
        double x = std::floor(want_real(v) + 0.5);
        if (x < 0) x = 0;
        return RtVal::nat(static_cast<std::uint64_t>(x));
    });
    sig.add_mono("nat2real", N, R, [](const RtVal& v) {
        if (v.kind != RtKind::Nat) throw RuntimeFault("expected nat argument");
        return RtVal::real(static_cast<double>(v.n));
    });

    // Closed-form ODE solutions.
    sig.add_mono("line", RR, R, [](const RtVal& v) {
        auto [x0, t] = want_real2(v);
        return RtVal::real(x0 + t);
    });
    sig.add_mono("ball_u", R3, R, [](const RtVal& v) {
        auto [u, v0, t] = want_real3(v);
        return RtVal::real(u + v0 * t - 4.9 * t * t);
    });
    sig.add_mono("ball_v", R3, R, [](const RtVal& v) {
        auto [u, v0, t] = want_real3(v);
        (void)u;
        return RtVal::real(v0 - 9.8 * t);
    });
    sig.add_mono("accel_u", R3, R, [](const RtVal& v) {
        auto [u, v0, t] = want_real3(v);
        return RtVal::real(u + v0 * t + t * t / 2.0);
    });
    sig.add_mono("accel_v", R3, R, [](const RtVal& v) {
        auto [u, v0, t] = want_real3(v);
        (void)u;
        return RtVal::real(v0 + t);
    });
    sig.add_mono("brake_u", R3, R, [](const RtVal& v) {
        auto [u, v0, t] = want_real3(v);
        return RtVal::real(u + v0 * t - t * t / 2.0);
    });
    sig.add_mono("brake_v", R3, R, [](const RtVal& v) {
        auto [u, v0, t] = want_real3(v);
        (void)u;
        return RtVal::real(v0 - t);
    });
    sig.add_mono("signal", RR, R, [](const RtVal& v) {
        auto [x, t] = want_real2(v);
        return RtVal::real(std::sin(x + t));
    });
    return sig;
}

}  // namespace

const Signature& builtin_signature() {
    static const Signature sig = make_builtins();
    return sig;
}

// ---------------------------------------------------------------------------
// Boundary solver
// ---------------------------------------------------------------------------

namespace {

// Trailing zero bits of the raw IEEE-754 pattern. An exactly representable
// boundary (1.0, 0.5, 3.0, ...) has a long zero run, while its neighbours
// and arbitrary roots have essentially none.
int mantissa_trailing_zeros(double d) {
    if (d == 0.0) return 64;
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    return std::countr_zero(bits);
}

}  // namespace

SnapResult snap_boundary(double lo, double hi) {
    // Guards over continuous trajectories are closed conditions unless the
    // threshold is strict and lands exactly on a representable value, so
    // closed-at-lo is the default and hi must earn the open verdict.
    constexpr int kDecisiveBits = 24;
    int tlo = mantissa_trailing_zeros(lo);
    int thi = mantissa_trailing_zeros(hi);
    if (thi > tlo && thi >= kDecisiveBits) return {hi, false};
    return {lo, true};
}

Boundary find_boundary(const TimeFun& h, const std::function<bool(const RtVal&)>& pred,
                       const EvalParams& params) {
    auto holds = [&](double t) { return pred(h.at(t)); };

    if (!holds(0.0)) return {0.0, false};

    // Forward scan: fixed grid for the first window, then geometric step
    // growth so unbounded trajectories reach the horizon quickly. Sub-grid
    // sign-change pairs past the linear window are assumed absent (guards
    // are expected monotone near their threshold).
    const int linear_points = 64;
    double last_true = 0.0;
    double first_false = -1.0;
    double t = 0.0;
    double step = params.grid_step;
    for (int i = 1; t < params.horizon; ++i) {
        t = (i <= linear_points) ? i * params.grid_step : t + step;
        if (i > linear_points) step *= 2.0;
        if (t > params.horizon) t = params.horizon;
        if (!holds(t)) {
            first_false = t;
            break;
        }
        last_true = t;
        if (t >= params.horizon) break;
    }
    if (first_false < 0.0) return {kInf, false};

    // Bisect down to adjacent doubles, maintaining holds(lo) && !holds(hi).
    double lo = last_true, hi = first_false;
    while (true) {
        double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        (holds(mid) ? lo : hi) = mid;
    }
    SnapResult snap = snap_boundary(lo, hi);
    return {snap.d, snap.closed};
}

Boundary find_boundary(const TimeFun& h, const ValuePtr& guard, const std::string& state_binder,
                       const Env& env, const EvalParams& params) {
    auto pred = [&](const RtVal& x) {
        Env e = env;
        e[state_binder] = x;
        RtVal b = eval_value(e, guard);
        if (b.kind != RtKind::Bool) throw RuntimeFault("guard did not evaluate to a boolean");
        return b.b;
    };
    return find_boundary(h, pred, params);
}

}  // namespace hybcore

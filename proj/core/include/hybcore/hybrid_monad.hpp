#ifndef HYBCORE_HYBRID_MONAD_HPP
#define HYBCORE_HYBRID_MONAD_HPP

#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hybcore/duration_monad.hpp"
#include "hybcore/prim.hpp"

namespace hybcore {

// ---------------------------------------------------------------------------
// Piecewise trajectories: the hybrid monad H. A trajectory is closed
// convergent (cc), closed divergent (cd) or open divergent (od); its domain
// is [0, dur] for the closed tags and [0, dur) for od. The empty trajectory
// (od, 0) is the Kleisli zero.
// ---------------------------------------------------------------------------

enum class TrajTag { cc, cd, od };

enum class TruncationKind { none, zeno, infinite, exhausted };

struct ShapeViolation : std::runtime_error {
    ShapeViolation()
        : std::runtime_error("iteration body produced a continuation value off-endpoint") {}
};

template <class X>
struct Segment {
    double len = 0.0;                // last segment of an od trajectory may be inf
    std::function<X(double)> at;     // local time, 0 <= s <= len
};

template <class X>
struct Traj {
    using value_type = X;

    TrajTag tag = TrajTag::od;
    double dur = 0.0;                // inf only for od
    std::vector<Segment<X>> segments;
    bool truncated = false;          // Zeno/budget cut the segment list
    TruncationKind trunc_kind = TruncationKind::none;

    bool is_bottom() const { return tag == TrajTag::od && dur == 0.0; }
    bool closed() const { return tag != TrajTag::od; }

    // Extent actually covered by materialized segments.
    double materialized() const {
        double s = 0.0;
        for (const auto& seg : segments) s += seg.len;
        return s;
    }
};

template <class X>
Traj<X> h_bottom() {
    return Traj<X>{};
}

template <class X>
Traj<X> h_unit(X x) {
    Traj<X> t;
    t.tag = TrajTag::cc;
    t.dur = 0.0;
    t.segments.push_back({0.0, [x = std::move(x)](double) { return x; }});
    return t;
}

template <class X, class F>
auto map_traj(const Traj<X>& T, F f) -> Traj<decltype(f(std::declval<X>()))> {
    using Y = decltype(f(std::declval<X>()));
    Traj<Y> out;
    out.tag = T.tag;
    out.dur = T.dur;
    out.truncated = T.truncated;
    out.trunc_kind = T.trunc_kind;
    out.segments.reserve(T.segments.size());
    for (const auto& seg : T.segments)
        out.segments.push_back({seg.len, [f, fn = seg.at](double s) { return f(fn(s)); }});
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation.
// ---------------------------------------------------------------------------

template <class X>
struct TrajEval {
    std::optional<X> value;
    bool truncated_gap = false;  // t inside the domain but past materialized segments
};

template <class X>
TrajEval<X> eval_traj(const Traj<X>& T, double t) {
    if (t < 0) return {};
    bool closed = T.closed();
    if (closed ? t > T.dur : t >= T.dur) return {};
    double start = 0.0;
    for (std::size_t i = 0; i < T.segments.size(); ++i) {
        const auto& seg = T.segments[i];
        bool last = i + 1 == T.segments.size();
        if (closed && last && !T.truncated && t == T.dur)
            return {seg.at(seg.len), false};  // exact endpoint, no accumulation drift
        double local = t - start;
        if (local < seg.len) return {seg.at(local), false};
        if (closed && last && local <= seg.len) return {seg.at(local), false};
        start += seg.len;
    }
    return {std::nullopt, true};
}

// ---------------------------------------------------------------------------
// The endpoint-flag transformation: every point carries a Boolean that is
// true exactly at the endpoint of a closed convergent trajectory.
// ---------------------------------------------------------------------------

template <class X>
Traj<std::pair<X, bool>> kappa(const Traj<X>& T) {
    Traj<std::pair<X, bool>> out;
    out.tag = T.tag;
    out.dur = T.dur;
    out.truncated = T.truncated;
    out.trunc_kind = T.trunc_kind;
    bool cc = T.tag == TrajTag::cc;
    for (std::size_t i = 0; i < T.segments.size(); ++i) {
        const auto& seg = T.segments[i];
        bool last = i + 1 == T.segments.size();
        bool can_flag = cc && last;
        double len = seg.len;
        out.segments.push_back({len, [fn = seg.at, can_flag, len](double s) {
                                    return std::make_pair(fn(s), can_flag && s == len);
                                }});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Internal: shared scanning helpers.
// ---------------------------------------------------------------------------

namespace detail {

// Sample times covering [0, extent] (endpoint included when closed_end):
// every segment breakpoint plus step-spaced points, geometrically
// accelerated after the first window so infinite extents stay tractable.
template <class Visit>
bool scan_times(const std::vector<double>& breaks, double extent, bool closed_end,
                const EvalParams& params, Visit visit) {
    double step = params.seq_check_step;
    std::size_t bi = 0;
    double t = 0.0;
    int linear = 0;
    const int linear_points = 64;
    while (true) {
        while (bi < breaks.size() && breaks[bi] <= t) ++bi;
        if (t >= extent || t > params.horizon) break;
        if (!visit(t)) return false;
        double nxt = t + step;
        if (++linear > linear_points) step *= 2.0;
        if (bi < breaks.size() && breaks[bi] < nxt) nxt = breaks[bi];
        t = nxt;
    }
    if (closed_end && extent <= params.horizon) return visit(extent);
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kleisli lifting. The continuum condition "f is defined along the whole
// run" is checked at segment breakpoints and step-spaced samples; between
// samples it is assumed to not flip (same discipline as the boundary
// solver).
// ---------------------------------------------------------------------------

template <class X, class F,
          class Y = typename decltype(std::declval<F&>()(std::declval<X>()))::value_type>
Traj<Y> h_bind(F f, const Traj<X>& T, const EvalParams& params) {
    if (T.is_bottom()) return h_bottom<Y>();

    auto value_at = [&T](double s) -> X {
        auto r = eval_traj(T, s);
        if (!r.value) throw RuntimeFault("trajectory evaluated outside its materialized domain");
        return *r.value;
    };
    auto alive = [&](double s) { return !f(value_at(s)).is_bottom(); };

    std::vector<double> breaks;
    double acc = 0.0;
    for (const auto& seg : T.segments) {
        acc += seg.len;
        breaks.push_back(acc);
    }
    double extent = std::min(acc, T.dur);
    bool closed_end = T.closed() && !T.truncated;

    double last_good = -1.0, first_bad = -1.0;
    detail::scan_times(breaks, extent, closed_end, params, [&](double s) {
        if (alive(s)) {
            last_good = s;
            return true;
        }
        first_bad = s;
        return false;
    });

    // New-value-at-time-0 of f applied along the run.
    auto through_f = [f](const X& x) -> Y {
        Traj<Y> ft = f(x);
        auto r = eval_traj(ft, 0.0);
        if (!r.value)
            throw RuntimeFault("divergence between samples in trajectory composition");
        return *r.value;
    };

    // Segments covering [0, upto) with values pushed through f at time 0.
    auto compose_prefix = [&](double upto) {
        std::vector<Segment<Y>> out;
        double start = 0.0;
        for (const auto& seg : T.segments) {
            if (start >= upto) break;
            double len = std::min(seg.len, upto - start);
            if (len > 0)
                out.push_back({len, [through_f, fn = seg.at](double s) {
                                   return through_f(fn(s));
                               }});
            start += seg.len;
        }
        return out;
    };
    auto endpoint_seg = [&](double at_time) -> Segment<Y> {
        Y y = through_f(value_at(at_time));
        return {0.0, [y](double) { return y; }};
    };

    if (first_bad >= 0.0) {
        // D ends strictly inside the trajectory: refine the cut point.
        double lo = last_good, hi = first_bad;
        if (lo < 0.0) return h_bottom<Y>();  // f diverges already at 0
        while (true) {
            double mid = lo + (hi - lo) / 2.0;
            if (mid <= lo || mid >= hi) break;
            (alive(mid) ? lo : hi) = mid;
        }
        SnapResult snap = snap_boundary(lo, hi);
        double cut = snap.d;
        bool closed_cut = snap.closed;  // f alive at the reported cut
        Traj<Y> out;
        out.tag = closed_cut ? TrajTag::cd : TrajTag::od;
        out.dur = cut;
        out.segments = compose_prefix(cut);
        if (closed_cut) out.segments.push_back(endpoint_seg(cut));
        if (out.tag == TrajTag::od && out.dur == 0.0) out.segments.clear();
        return out;
    }

    // D covers the whole domain.
    if (T.tag == TrajTag::cc) {
        Traj<Y> ft = f(value_at(T.dur));
        Traj<Y> out;
        out.tag = ft.tag;
        out.dur = T.dur + ft.dur;
        out.truncated = ft.truncated;
        out.trunc_kind = ft.trunc_kind;
        out.segments = compose_prefix(T.dur);
        for (const auto& seg : ft.segments) out.segments.push_back(seg);
        return out;
    }
    Traj<Y> out;
    out.tag = T.tag;  // cd stays cd; od stays od
    out.dur = T.dur;
    out.truncated = T.truncated;
    out.trunc_kind = T.trunc_kind;
    out.segments = compose_prefix(extent);
    if (T.tag == TrajTag::cd) out.segments.push_back(endpoint_seg(T.dur));
    return out;
}

// ---------------------------------------------------------------------------
// Elgot iteration by approximant unfolding. The body must put continuation
// values (inr) only at the endpoint of closed convergent iterates; this is
// checked at sample points as the unfolding proceeds.
// ---------------------------------------------------------------------------

template <class Y, class X, class F>  // F : X -> Traj<Either<Y, X>>
Traj<Y> h_iter(F f, X x, const EvalParams& params) {
    using E = Either<Y, X>;
    std::vector<Segment<Y>> segs;
    double total = 0.0;
    DurationAccumulator acc(params);
    X cur = std::move(x);

    auto project = [](const E& e) -> Y {
        if (!e.is_inl) throw ShapeViolation();
        return e.l;
    };

    auto check_shape = [&params](const Traj<E>& T) {
        std::vector<double> breaks;
        double a = 0.0;
        for (const auto& seg : T.segments) {
            a += seg.len;
            breaks.push_back(a);
        }
        double extent = std::min(a, T.dur);
        detail::scan_times(breaks, extent, false, params, [&](double s) {
            auto r = eval_traj(T, s);
            if (r.value && !r.value->is_inl && !(T.tag == TrajTag::cc && s == T.dur))
                throw ShapeViolation();
            return true;
        });
    };

    auto append_projected = [&](const Traj<E>& T) {
        for (const auto& seg : T.segments) {
            if (seg.len <= 0) continue;
            segs.push_back({seg.len, [project, fn = seg.at](double s) { return project(fn(s)); }});
        }
    };

    for (int i = 0; i < params.max_unfold; ++i) {
        Traj<E> T = f(cur);
        check_shape(T);
        if (T.tag != TrajTag::cc) {
            // Divergent iterate: its tag and values carry over.
            Traj<Y> out;
            out.tag = T.tag;
            out.dur = total + T.dur;
            append_projected(T);
            if (T.tag == TrajTag::cd) {
                auto end = eval_traj(T, T.dur);
                if (!end.value)
                    throw RuntimeFault("closed trajectory undefined at its endpoint");
                segs.push_back({0.0, [y = project(*end.value)](double) { return y; }});
            }
            out.segments = std::move(segs);
            out.truncated = T.truncated;
            out.trunc_kind = T.trunc_kind;
            return out;
        }
        auto end = eval_traj(T, T.dur);
        if (!end.value) throw RuntimeFault("closed trajectory undefined at its endpoint");
        if (end.value->is_inl) {
            append_projected(T);
            total += T.dur;
            Traj<Y> out;
            out.tag = TrajTag::cc;
            out.dur = total;
            out.segments = std::move(segs);
            out.segments.push_back({0.0, [y = end.value->l](double) { return y; }});
            return out;
        }
        append_projected(T);
        total += T.dur;
        acc.add(T.dur);
        cur = end.value->r;
    }

    SumOutcome so = acc.classify();
    Traj<Y> out;
    out.tag = TrajTag::od;
    out.truncated = true;
    switch (so.kind) {
        case SumOutcome::Kind::Infinite:
            out.dur = std::numeric_limits<double>::infinity();
            out.trunc_kind = TruncationKind::infinite;
            break;
        case SumOutcome::Kind::ZenoLimit:
            out.dur = total;
            out.trunc_kind = TruncationKind::zeno;
            break;
        default:
            out.dur = total;
            out.trunc_kind = TruncationKind::exhausted;
            break;
    }
    out.segments = std::move(segs);
    if (out.dur == 0.0) out.segments.clear();
    return out;
}

}  // namespace hybcore

#endif

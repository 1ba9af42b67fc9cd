#ifndef HYBCORE_DURATION_MONAD_HPP
#define HYBCORE_DURATION_MONAD_HPP

#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hybcore/prim.hpp"

namespace hybcore {

// ---------------------------------------------------------------------------
// Sum values for iteration bodies.
// ---------------------------------------------------------------------------

template <class L, class R>
struct Either {
    bool is_inl = true;
    L l{};
    R r{};
    static Either inl(L v) {
        Either e;
        e.is_inl = true;
        e.l = std::move(v);
        return e;
    }
    static Either inr(R v) {
        Either e;
        e.is_inl = false;
        e.r = std::move(v);
        return e;
    }
};

// ---------------------------------------------------------------------------
// Duration monad Q: a timed result or a (possibly infinite) divergence time.
// The exhausted flag marks divergence durations that are only partial sums
// because the unfolding budget ran out inconclusively.
// ---------------------------------------------------------------------------

template <class X>
struct QRes {
    std::optional<X> value;
    double dur = 0.0;
    bool exhausted = false;

    static QRes done(double d, X x) {
        QRes q;
        q.dur = d;
        q.value = std::move(x);
        return q;
    }
    static QRes diverge(double d, bool exhausted = false) {
        QRes q;
        q.dur = d;
        q.exhausted = exhausted;
        return q;
    }
    bool is_done() const { return value.has_value(); }
};

template <class X>
QRes<X> q_unit(X x) {
    return QRes<X>::done(0.0, std::move(x));
}

// Kleisli lifting: durations add along the composition; divergence absorbs.
template <class X, class F>
auto q_bind(F&& f, const QRes<X>& q) -> decltype(f(*q.value)) {
    using R = decltype(f(*q.value));
    if (!q.is_done()) return R::diverge(q.dur, q.exhausted);
    R r = f(*q.value);
    r.dur += q.dur;
    return r;
}

// ---------------------------------------------------------------------------
// Layered duration monad Q-hat: finite words of durations with a result, or
// demand-driven infinite duration streams. A producer returning nullopt
// reports that the underlying unfolding actually left the stream (reached a
// result) beyond the inspection budget.
// ---------------------------------------------------------------------------

struct DurationStream {
    std::function<std::optional<double>()> next;
};

template <class X>
struct QHatRes {
    bool is_word = true;
    std::vector<double> word;
    std::optional<X> value;
    DurationStream stream;

    static QHatRes make_word(std::vector<double> w, X x) {
        QHatRes q;
        q.is_word = true;
        q.word = std::move(w);
        q.value = std::move(x);
        return q;
    }
    static QHatRes make_stream(DurationStream s) {
        QHatRes q;
        q.is_word = false;
        q.stream = std::move(s);
        return q;
    }
};

template <class X>
QHatRes<X> qhat_unit(X x) {
    return QHatRes<X>::make_word({}, std::move(x));
}

template <class X, class F>
auto qhat_bind(F&& f, QHatRes<X> q) -> decltype(f(*q.value)) {
    using R = decltype(f(*q.value));
    if (!q.is_word) return R::make_stream(std::move(q.stream));
    R r = f(*q.value);
    if (r.is_word) {
        std::vector<double> w = std::move(q.word);
        w.insert(w.end(), r.word.begin(), r.word.end());
        return R::make_word(std::move(w), std::move(*r.value));
    }
    auto state = std::make_shared<std::pair<std::vector<double>, std::size_t>>(
        std::move(q.word), 0);
    DurationStream tail = std::move(r.stream);
    DurationStream s;
    s.next = [state, tail]() -> std::optional<double> {
        if (state->second < state->first.size()) return state->first[state->second++];
        return tail.next();
    };
    return R::make_stream(std::move(s));
}

struct GuardednessViolation : std::runtime_error {
    GuardednessViolation() : std::runtime_error("unguarded iteration step: empty duration word") {}
};

// Unique guarded fixpoint of f : X -> QHat(Y + X), unfolded eagerly up to
// `budget` steps and lazily from there on.
template <class Y, class X, class F>
QHatRes<Y> qhat_iter_guarded(F f, X x, int budget) {
    std::vector<double> acc;
    X cur = std::move(x);
    for (int i = 0; i < budget; ++i) {
        QHatRes<Either<Y, X>> r = f(cur);
        if (!r.is_word) {
            // The body itself diverges: the iteration inherits its stream.
            auto state = std::make_shared<std::pair<std::vector<double>, std::size_t>>(
                std::move(acc), 0);
            DurationStream tail = std::move(r.stream);
            DurationStream s;
            s.next = [state, tail]() -> std::optional<double> {
                if (state->second < state->first.size())
                    return state->first[state->second++];
                return tail.next();
            };
            return QHatRes<Y>::make_stream(std::move(s));
        }
        if (r.value->is_inl) {
            acc.insert(acc.end(), r.word.begin(), r.word.end());
            return QHatRes<Y>::make_word(std::move(acc), std::move(r.value->l));
        }
        if (r.word.empty()) throw GuardednessViolation();
        acc.insert(acc.end(), r.word.begin(), r.word.end());
        cur = std::move(r.value->r);
    }
    // Budget exhausted with the loop still running: hand out the
    // concatenated durations on demand.
    struct LazyState {
        F f;
        X cur;
        std::vector<double> pending;
        std::size_t idx = 0;
        bool finished = false;
        bool streaming = false;
        DurationStream tail;
    };
    auto st = std::make_shared<LazyState>(LazyState{std::move(f), std::move(cur),
                                                    std::move(acc), 0, false, false, {}});
    DurationStream s;
    s.next = [st]() -> std::optional<double> {
        while (true) {
            if (st->idx < st->pending.size()) return st->pending[st->idx++];
            if (st->streaming) return st->tail.next();
            if (st->finished) return std::nullopt;
            QHatRes<Either<Y, X>> r = st->f(st->cur);
            st->pending.clear();
            st->idx = 0;
            if (!r.is_word) {
                st->streaming = true;
                st->tail = std::move(r.stream);
                continue;
            }
            st->pending = std::move(r.word);
            if (r.value->is_inl) {
                st->finished = true;
            } else {
                if (st->pending.empty()) throw GuardednessViolation();
                st->cur = std::move(r.value->r);
            }
        }
    };
    return QHatRes<Y>::make_stream(std::move(s));
}

// ---------------------------------------------------------------------------
// Classification of infinite duration sums under a finite budget.
// ---------------------------------------------------------------------------

struct SumOutcome {
    enum class Kind { Finite, Infinite, ZenoLimit, Exhausted };
    Kind kind = Kind::Finite;
    double total = 0.0;
};

class DurationAccumulator {
public:
    explicit DurationAccumulator(const EvalParams& params);

    void add(double d);
    double total() const { return total_; }
    std::size_t count() const { return count_; }

    // Verdict once the unfolding budget is exhausted.
    SumOutcome classify() const;

private:
    double zeno_eps_;
    std::size_t window_cap_;
    double horizon_;
    double total_ = 0.0;
    std::size_t count_ = 0;
    std::deque<double> window_;
};

// Consumes a stream under the params budget and classifies its sum.
SumOutcome classify_stream(DurationStream& s, const EvalParams& params);

// ---------------------------------------------------------------------------
// The retraction rho / upsilon between QHat and Q.
// ---------------------------------------------------------------------------

template <class X>
QRes<X> rho(QHatRes<X> q, const EvalParams& params) {
    if (q.is_word) {
        double total = 0.0;
        for (double d : q.word) total += d;
        return QRes<X>::done(total, std::move(*q.value));
    }
    SumOutcome so = classify_stream(q.stream, params);
    switch (so.kind) {
        case SumOutcome::Kind::Infinite:
            return QRes<X>::diverge(std::numeric_limits<double>::infinity());
        case SumOutcome::Kind::ZenoLimit:
            return QRes<X>::diverge(so.total);
        default:
            return QRes<X>::diverge(so.total, true);
    }
}

template <class X>
QHatRes<X> upsilon(const QRes<X>& q) {
    if (q.is_done()) return QHatRes<X>::make_word({q.dur}, *q.value);
    double d = q.dur;
    if (d == std::numeric_limits<double>::infinity()) {
        DurationStream s;
        s.next = []() -> std::optional<double> { return 1.0; };
        return QHatRes<X>::make_stream(std::move(s));
    }
    auto first = std::make_shared<bool>(true);
    DurationStream s;
    s.next = [first, d]() -> std::optional<double> {
        if (*first) {
            *first = false;
            return d;
        }
        return 0.0;
    };
    return QHatRes<X>::make_stream(std::move(s));
}

// ---------------------------------------------------------------------------
// Elgot iteration on Q: rho . (upsilon f)^dagger.
// ---------------------------------------------------------------------------

template <class Y, class X, class F>
QRes<Y> q_iter(F f, X x, const EvalParams& params) {
    auto tainted = std::make_shared<bool>(false);
    auto uf = [f = std::move(f), tainted](const X& z) {
        QRes<Either<Y, X>> r = f(z);
        if (!r.is_done() && r.exhausted) *tainted = true;
        return upsilon(r);
    };
    QRes<Y> out = rho(qhat_iter_guarded<Y>(uf, std::move(x), params.max_unfold), params);
    if (*tainted && !out.is_done()) out.exhausted = true;
    return out;
}

}  // namespace hybcore

#endif

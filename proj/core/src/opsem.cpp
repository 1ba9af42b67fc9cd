#include "hybcore/opsem.hpp"

#include <cmath>
#include <limits>

#include "hybcore/frontend.hpp"

namespace hybcore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Values substituted by the operational rules are pre-evaluated to literal
// form, matching the presentation of results like `now 1` in reductions.
ValuePtr normalize(const ValuePtr& closed_v) {
    return rt_to_term(eval_value({}, closed_v));
}

bool eval_guard(const ValuePtr& guard, const std::string& binder, const RtVal& x) {
    Env env;
    env[binder] = x;
    RtVal b = eval_value(env, guard);
    if (b.kind != RtKind::Bool) throw RuntimeFault("guard did not evaluate to a boolean");
    return b.b;
}

}  // namespace

std::string diverge_kind_str(DivergeKind k) {
    switch (k) {
        case DivergeKind::nonprogressive: return "nonprogressive";
        case DivergeKind::progressive: return "progressive";
        case DivergeKind::zeno: return "zeno";
        case DivergeKind::exhausted: return "exhausted";
    }
    return "?";
}

std::string BigStepOutcome::str() const {
    if (converged) return "Converged(" + format_real(dur) + ", " + pretty(value) + ")";
    return "Diverged(" + format_real(dur) + ", " + diverge_kind_str(kind) + ")";
}

DivergeKind kind_by_dur(double d) {
    if (d == 0.0) return DivergeKind::nonprogressive;
    if (d == kInf) return DivergeKind::progressive;
    return DivergeKind::zeno;
}

BigStepOutcome outcome_of_sum(const SumOutcome& so) {
    switch (so.kind) {
        case SumOutcome::Kind::Infinite:
            return BigStepOutcome::diverge(kInf, DivergeKind::progressive);
        case SumOutcome::Kind::ZenoLimit:
            return BigStepOutcome::diverge(so.total, kind_by_dur(so.total));
        default:
            return BigStepOutcome::diverge(so.total, DivergeKind::exhausted);
    }
}

// ---------------------------------------------------------------------------
// Small-step semantics
// ---------------------------------------------------------------------------

StepResult Evaluator::ss_step(const CompPtr& p) {
    switch (p->kind) {
        case CompKind::Now:
            return {StepResult::Kind::Terminal, 0.0, nullptr, p->val};
        case CompKind::PairMatch: {
            RtVal v = eval_value({}, p->val);
            if (v.kind != RtKind::Pair) throw RuntimeFault("pair match on non-pair value");
            Subst s{{p->binder, rt_to_term(v.first())}, {p->binder2, rt_to_term(v.second())}};
            return {StepResult::Kind::Step, 0.0, substitute(p->p, s), nullptr};
        }
        case CompKind::If: {
            RtVal b = eval_value({}, p->val);
            if (b.kind != RtKind::Bool) throw RuntimeFault("if condition not a boolean");
            return {StepResult::Kind::Step, 0.0, b.b ? p->p : p->q, nullptr};
        }
        case CompKind::Seq: {
            if (p->p->kind == CompKind::Now) {
                Subst s{{p->binder, normalize(p->p->val)}};
                return {StepResult::Kind::Step, 0.0, substitute(p->q, s), nullptr};
            }
            StepResult r = ss_step(p->p);
            if (r.kind == StepResult::Kind::Diverge) return r;
            return {StepResult::Kind::Step, r.dur, c_seq(p->binder, r.next, p->q), nullptr};
        }
        case CompKind::While: {
            if (p->p->kind == CompKind::Now) {
                ValuePtr v = normalize(p->p->val);
                if (eval_guard(p->val, p->binder, eval_value({}, v))) {
                    CompPtr next_init = substitute(p->q, Subst{{p->binder, v}});
                    return {StepResult::Kind::Step, 0.0,
                            c_while(p->binder, next_init, p->val, p->q), nullptr};
                }
                return {StepResult::Kind::Step, 0.0, c_now(v), nullptr};
            }
            StepResult r = ss_step(p->p);
            if (r.kind == StepResult::Kind::Diverge) return r;
            return {StepResult::Kind::Step, r.dur,
                    c_while(p->binder, r.next, p->val, p->q), nullptr};
        }
        case CompKind::Traj: {
            TimeFun h{p->val, p->binder, {}};
            Boundary b = find_boundary(h, p->val2, p->binder2, {}, params_);
            if (b.closed)
                return {StepResult::Kind::Step, b.d, c_now(rt_to_term(h.at(b.d))), nullptr};
            return {StepResult::Kind::Diverge, b.d, nullptr, nullptr};
        }
    }
    throw RuntimeFault("malformed computation term");
}

BigStepOutcome Evaluator::ss_run(const CompPtr& p) {
    CompPtr cur = p;
    double total = 0.0;
    DurationAccumulator acc(params_);
    for (int i = 0; i < params_.max_unfold; ++i) {
        StepResult r = ss_step(cur);
        switch (r.kind) {
            case StepResult::Kind::Terminal:
                return BigStepOutcome::converge(total, normalize(r.terminal));
            case StepResult::Kind::Diverge: {
                double d = total + r.dur;
                return BigStepOutcome::diverge(d, kind_by_dur(d));
            }
            case StepResult::Kind::Step:
                acc.add(r.dur);
                total += r.dur;
                cur = r.next;
                break;
        }
    }
    return outcome_of_sum(acc.classify());
}

// ---------------------------------------------------------------------------
// Big-step duration semantics
// ---------------------------------------------------------------------------

BigStepOutcome Evaluator::bs_duration(const CompPtr& p) {
    auto it = bs_cache_.find(p);
    if (it != bs_cache_.end()) return it->second;
    BigStepOutcome out = bs_uncached(p);
    bs_cache_.emplace(p, out);
    return out;
}

BigStepOutcome Evaluator::bs_uncached(const CompPtr& p) {
    switch (p->kind) {
        case CompKind::Now:
            return BigStepOutcome::converge(0.0, normalize(p->val));
        case CompKind::PairMatch: {
            RtVal v = eval_value({}, p->val);
            if (v.kind != RtKind::Pair) throw RuntimeFault("pair match on non-pair value");
            Subst s{{p->binder, rt_to_term(v.first())}, {p->binder2, rt_to_term(v.second())}};
            return bs_duration(substitute(p->p, s));
        }
        case CompKind::If: {
            RtVal b = eval_value({}, p->val);
            if (b.kind != RtKind::Bool) throw RuntimeFault("if condition not a boolean");
            return bs_duration(b.b ? p->p : p->q);
        }
        case CompKind::Seq: {
            BigStepOutcome r1 = bs_duration(p->p);
            if (!r1.converged) return r1;
            BigStepOutcome r2 = bs_duration(substitute(p->q, Subst{{p->binder, r1.value}}));
            double d = r1.dur + r2.dur;
            if (r2.converged) return BigStepOutcome::converge(d, r2.value);
            return BigStepOutcome::diverge(
                d, r2.kind == DivergeKind::exhausted ? DivergeKind::exhausted : kind_by_dur(d));
        }
        case CompKind::Traj: {
            TimeFun h{p->val, p->binder, {}};
            Boundary b = find_boundary(h, p->val2, p->binder2, {}, params_);
            if (b.closed) return BigStepOutcome::converge(b.d, rt_to_term(h.at(b.d)));
            return BigStepOutcome::diverge(b.d, kind_by_dur(b.d));
        }
        case CompKind::While: {
            BigStepOutcome r = bs_duration(p->p);
            if (!r.converged)
                return BigStepOutcome::diverge(r.dur, r.kind == DivergeKind::exhausted
                                                          ? DivergeKind::exhausted
                                                          : kind_by_dur(r.dur));
            double total = r.dur;
            DurationAccumulator acc(params_);
            acc.add(r.dur);
            ValuePtr v = r.value;
            for (int i = 0; i < params_.max_unfold; ++i) {
                if (!eval_guard(p->val, p->binder, eval_value({}, v)))
                    return BigStepOutcome::converge(total, v);
                BigStepOutcome rb = bs_duration(substitute(p->q, Subst{{p->binder, v}}));
                if (!rb.converged) {
                    double d = total + rb.dur;
                    return BigStepOutcome::diverge(d, rb.kind == DivergeKind::exhausted
                                                          ? DivergeKind::exhausted
                                                          : kind_by_dur(d));
                }
                total += rb.dur;
                acc.add(rb.dur);
                v = rb.value;
            }
            SumOutcome so = acc.classify();
            BigStepOutcome out = outcome_of_sum(so);
            if (so.kind == SumOutcome::Kind::ZenoLimit) out.dur = total;
            return out;
        }
    }
    throw RuntimeFault("malformed computation term");
}

// ---------------------------------------------------------------------------
// Big-step evolution semantics
// ---------------------------------------------------------------------------

EvoResult Evaluator::evo_eval(const CompPtr& p, double t) {
    if (t < 0) return EvoResult::undefined();
    switch (p->kind) {
        case CompKind::Now:
            if (t == 0.0) return EvoResult::at(eval_value({}, p->val));
            return EvoResult::undefined();
        case CompKind::PairMatch: {
            RtVal v = eval_value({}, p->val);
            if (v.kind != RtKind::Pair) throw RuntimeFault("pair match on non-pair value");
            Subst s{{p->binder, rt_to_term(v.first())}, {p->binder2, rt_to_term(v.second())}};
            return evo_eval(substitute(p->p, s), t);
        }
        case CompKind::If: {
            RtVal b = eval_value({}, p->val);
            if (b.kind != RtKind::Bool) throw RuntimeFault("if condition not a boolean");
            return evo_eval(b.b ? p->p : p->q, t);
        }
        case CompKind::Traj: {
            BigStepOutcome r = bs_duration(p);
            TimeFun h{p->val, p->binder, {}};
            if (r.converged ? t <= r.dur : t < r.dur) return EvoResult::at(h.at(t));
            return EvoResult::undefined();
        }
        case CompKind::Seq: {
            BigStepOutcome r = bs_duration(p->p);
            double limit = r.converged ? std::min(t, r.dur) : t;
            // Continuum premises, sampled: the first computation evaluates
            // everywhere up to `limit`, and the continuation evaluates at 0
            // for each of those values.
            double step = params_.seq_check_step;
            double s = 0.0;
            std::optional<RtVal> v_at_limit;
            while (true) {
                if (s > limit) s = limit;
                EvoResult vs = evo_eval(p->p, s);
                if (!vs.defined()) return EvoResult::undefined();
                EvoResult ws =
                    evo_eval(substitute(p->q, Subst{{p->binder, rt_to_term(*vs.value)}}), 0.0);
                if (!ws.defined()) return EvoResult::undefined();
                if (s == limit) {
                    v_at_limit = vs.value;
                    break;
                }
                s += step;
            }
            if (!r.converged || t < r.dur) {
                // The whole instant lies inside the first computation.
                return evo_eval(
                    substitute(p->q, Subst{{p->binder, rt_to_term(*v_at_limit)}}), 0.0);
            }
            return evo_eval(substitute(p->q, Subst{{p->binder, rt_to_term(*v_at_limit)}}),
                            t - r.dur);
        }
        case CompKind::While: {
            CompPtr cur = p->p;
            double t_rem = t;
            for (int i = 0; i < params_.max_unfold; ++i) {
                BigStepOutcome r = bs_duration(cur);
                if (!r.converged)
                    return t_rem < r.dur ? evo_eval(cur, t_rem) : EvoResult::undefined();
                if (t_rem < r.dur) return evo_eval(cur, t_rem);
                EvoResult we = evo_eval(cur, r.dur);
                if (!we.defined()) return EvoResult::undefined();
                if (!eval_guard(p->val, p->binder, *we.value))
                    return t_rem == r.dur ? EvoResult::at(*we.value) : EvoResult::undefined();
                cur = substitute(p->q, Subst{{p->binder, rt_to_term(*we.value)}});
                t_rem -= r.dur;
            }
            return EvoResult::undefined();
        }
    }
    throw RuntimeFault("malformed computation term");
}

BigStepOutcome bs_duration(const CompPtr& p, const EvalParams& params) {
    return Evaluator(params).bs_duration(p);
}

BigStepOutcome ss_run(const CompPtr& p, const EvalParams& params) {
    return Evaluator(params).ss_run(p);
}

EvoResult evo_eval(const CompPtr& p, double t, const EvalParams& params) {
    return Evaluator(params).evo_eval(p, t);
}

}  // namespace hybcore

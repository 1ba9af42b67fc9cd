#include "hybcore/denote.hpp"

namespace hybcore {

namespace {

bool guard_at(const ValuePtr& guard, const std::string& binder, const Env& env, const RtVal& x) {
    Env e = env;
    e[binder] = x;
    RtVal b = eval_value(e, guard);
    if (b.kind != RtKind::Bool) throw RuntimeFault("guard did not evaluate to a boolean");
    return b.b;
}

}  // namespace

DenV denote_value(const ValuePtr& v) {
    return [v](const Env& env) { return eval_value(env, v); };
}

DenQ denote_q(const CompPtr& p, const EvalParams& params) {
    switch (p->kind) {
        case CompKind::Now: {
            ValuePtr v = p->val;
            return [v](const Env& env) { return q_unit(eval_value(env, v)); };
        }
        case CompKind::Seq: {
            DenQ dp = denote_q(p->p, params);
            DenQ dq = denote_q(p->q, params);
            std::string x = p->binder;
            return [dp, dq, x](const Env& env) {
                return q_bind(
                    [&](const RtVal& xv) {
                        Env e = env;
                        e[x] = xv;
                        return dq(e);
                    },
                    dp(env));
            };
        }
        case CompKind::PairMatch: {
            DenQ dp = denote_q(p->p, params);
            ValuePtr v = p->val;
            std::string x = p->binder, y = p->binder2;
            return [dp, v, x, y](const Env& env) {
                RtVal pv = eval_value(env, v);
                if (pv.kind != RtKind::Pair) throw RuntimeFault("pair match on non-pair value");
                Env e = env;
                e[x] = pv.first();
                e[y] = pv.second();
                return dp(e);
            };
        }
        case CompKind::If: {
            DenQ dp = denote_q(p->p, params);
            DenQ dq = denote_q(p->q, params);
            ValuePtr b = p->val;
            return [dp, dq, b](const Env& env) {
                RtVal bv = eval_value(env, b);
                if (bv.kind != RtKind::Bool) throw RuntimeFault("if condition not a boolean");
                return bv.b ? dp(env) : dq(env);
            };
        }
        case CompKind::Traj: {
            ValuePtr v = p->val, guard = p->val2;
            std::string tb = p->binder, xb = p->binder2;
            EvalParams prms = params;
            return [v, guard, tb, xb, prms](const Env& env) {
                TimeFun h{v, tb, env};
                Boundary b = find_boundary(h, guard, xb, env, prms);
                if (b.closed) return QRes<RtVal>::done(b.d, h.at(b.d));
                return QRes<RtVal>::diverge(b.d);
            };
        }
        case CompKind::While: {
            DenQ dinit = denote_q(p->p, params);
            DenQ dbody = denote_q(p->q, params);
            ValuePtr guard = p->val;
            std::string x = p->binder;
            EvalParams prms = params;
            return [dinit, dbody, guard, x, prms](const Env& env) {
                using E = Either<RtVal, RtVal>;
                auto f = [dbody, guard, x, env](const RtVal& xv) -> QRes<E> {
                    if (!guard_at(guard, x, env, xv)) return q_unit(E::inl(xv));
                    Env e = env;
                    e[x] = xv;
                    QRes<RtVal> rb = dbody(e);
                    if (!rb.is_done()) return QRes<E>::diverge(rb.dur, rb.exhausted);
                    return QRes<E>::done(rb.dur, E::inr(*rb.value));
                };
                return q_bind(
                    [&](const RtVal& x0) { return q_iter<RtVal>(f, x0, prms); }, dinit(env));
            };
        }
    }
    throw RuntimeFault("malformed computation term");
}

DenH denote_h(const CompPtr& p, const EvalParams& params) {
    switch (p->kind) {
        case CompKind::Now: {
            ValuePtr v = p->val;
            return [v](const Env& env) { return h_unit(eval_value(env, v)); };
        }
        case CompKind::Seq: {
            DenH dp = denote_h(p->p, params);
            DenH dq = denote_h(p->q, params);
            std::string x = p->binder;
            EvalParams prms = params;
            return [dp, dq, x, prms](const Env& env) {
                auto f = [dq, x, env](const RtVal& xv) {
                    Env e = env;
                    e[x] = xv;
                    return dq(e);
                };
                return h_bind(f, dp(env), prms);
            };
        }
        case CompKind::PairMatch: {
            DenH dp = denote_h(p->p, params);
            ValuePtr v = p->val;
            std::string x = p->binder, y = p->binder2;
            return [dp, v, x, y](const Env& env) {
                RtVal pv = eval_value(env, v);
                if (pv.kind != RtKind::Pair) throw RuntimeFault("pair match on non-pair value");
                Env e = env;
                e[x] = pv.first();
                e[y] = pv.second();
                return dp(e);
            };
        }
        case CompKind::If: {
            DenH dp = denote_h(p->p, params);
            DenH dq = denote_h(p->q, params);
            ValuePtr b = p->val;
            return [dp, dq, b](const Env& env) {
                RtVal bv = eval_value(env, b);
                if (bv.kind != RtKind::Bool) throw RuntimeFault("if condition not a boolean");
                return bv.b ? dp(env) : dq(env);
            };
        }
        case CompKind::Traj: {
            ValuePtr v = p->val, guard = p->val2;
            std::string tb = p->binder, xb = p->binder2;
            EvalParams prms = params;
            return [v, guard, tb, xb, prms](const Env& env) {
                TimeFun h{v, tb, env};
                Boundary b = find_boundary(h, guard, xb, env, prms);
                Traj<RtVal> out;
                out.tag = b.closed ? TrajTag::cc : TrajTag::od;
                out.dur = b.d;
                out.segments.push_back({b.d, [h](double s) { return h.at(s); }});
                if (out.is_bottom()) out.segments.clear();
                return out;
            };
        }
        case CompKind::While: {
            DenH dinit = denote_h(p->p, params);
            DenH dbody = denote_h(p->q, params);
            ValuePtr guard = p->val;
            std::string x = p->binder;
            EvalParams prms = params;
            return [dinit, dbody, guard, x, prms](const Env& env) -> Traj<RtVal> {
                using Flag = std::pair<RtVal, bool>;
                using E = Either<RtVal, Flag>;
                // Loop body over flagged values: continue only from the
                // endpoint of a closed convergent iterate whose guard holds.
                auto F = [dbody, guard, x, env](const Flag& fx) -> Traj<E> {
                    if (!fx.second || !guard_at(guard, x, env, fx.first))
                        return h_unit(E::inl(fx.first));
                    Env e = env;
                    e[x] = fx.first;
                    Traj<RtVal> Tb = dbody(e);
                    return map_traj(kappa(Tb), [](const Flag& ac) {
                        return ac.second ? E::inr(ac) : E::inl(ac.first);
                    });
                };
                auto iter = [F, prms](const Flag& fx) { return h_iter<RtVal>(F, fx, prms); };
                return h_bind(iter, kappa(dinit(env)), prms);
            };
        }
    }
    throw RuntimeFault("malformed computation term");
}

}  // namespace hybcore

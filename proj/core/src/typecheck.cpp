#include "hybcore/typecheck.hpp"

namespace hybcore {

Ty infer_value(const Context& ctx, const ValuePtr& v, const Signature& sig) {
    switch (v->kind) {
        case ValueKind::Var: {
            const Ty* t = ctx.lookup(v->name);
            if (!t)
                throw TypeError(TypeError::Kind::UnboundVariable,
                                "unbound variable: " + v->name);
            return *t;
        }
        case ValueKind::Star: return Ty::unit();
        case ValueKind::True:
        case ValueKind::False: return Ty::boolean();
        case ValueKind::RealLit: return Ty::real();
        case ValueKind::NatLit: return Ty::nat();
        case ValueKind::Pair:
            return Ty::prod(infer_value(ctx, v->a, sig), infer_value(ctx, v->b, sig));
        case ValueKind::SigApp: {
            const SigEntry* entry = sig.find(v->name);
            if (!entry)
                throw TypeError(TypeError::Kind::UnknownSymbol,
                                "unknown signature symbol: " + v->name);
            Ty arg = infer_value(ctx, v->a, sig);
            auto res = entry->type_of(arg);
            if (!res)
                throw TypeError(TypeError::Kind::ArgumentTypeMismatch,
                                "symbol " + v->name + " does not accept argument of type " +
                                    arg.str());
            return *res;
        }
    }
    throw TypeError(TypeError::Kind::ArgumentTypeMismatch, "malformed value term");
}

Ty infer_comp(const Context& ctx, const CompPtr& p, const Signature& sig) {
    switch (p->kind) {
        case CompKind::Now:
            return infer_value(ctx, p->val, sig);
        case CompKind::Seq: {
            Ty a = infer_comp(ctx, p->p, sig);
            Context inner = ctx;
            inner.push(p->binder, a);
            return infer_comp(inner, p->q, sig);
        }
        case CompKind::PairMatch: {
            Ty v = infer_value(ctx, p->val, sig);
            if (!v.is_prod())
                throw TypeError(TypeError::Kind::ScrutineeNotPair,
                                "pair match on non-product value of type " + v.str());
            Context inner = ctx;
            inner.push(p->binder, v.left());
            inner.push(p->binder2, v.right());
            return infer_comp(inner, p->p, sig);
        }
        case CompKind::If: {
            Ty b = infer_value(ctx, p->val, sig);
            if (b != Ty::boolean())
                throw TypeError(TypeError::Kind::GuardNotBool,
                                "if condition has type " + b.str());
            Ty t1 = infer_comp(ctx, p->p, sig);
            Ty t2 = infer_comp(ctx, p->q, sig);
            if (t1 != t2)
                throw TypeError(TypeError::Kind::BranchTypeMismatch,
                                "branch types differ: " + t1.str() + " vs " + t2.str());
            return t1;
        }
        case CompKind::While: {
            Ty a = infer_comp(ctx, p->p, sig);
            Context inner = ctx;
            inner.push(p->binder, a);
            Ty g = infer_value(inner, p->val, sig);
            if (g != Ty::boolean())
                throw TypeError(TypeError::Kind::GuardNotBool,
                                "while guard has type " + g.str());
            Ty body = infer_comp(inner, p->q, sig);
            if (body != a)
                throw TypeError(TypeError::Kind::LoopTypeMismatch,
                                "loop body type " + body.str() + " differs from init type " +
                                    a.str());
            return a;
        }
        case CompKind::Traj: {
            Context tctx = ctx;
            tctx.push(p->binder, Ty::real());
            Ty a = infer_value(tctx, p->val, sig);
            Context gctx = ctx;
            gctx.push(p->binder2, a);
            Ty g = infer_value(gctx, p->val2, sig);
            if (g != Ty::boolean())
                throw TypeError(TypeError::Kind::GuardNotBool,
                                "trajectory guard has type " + g.str());
            return a;
        }
    }
    throw TypeError(TypeError::Kind::ArgumentTypeMismatch, "malformed computation term");
}

}  // namespace hybcore

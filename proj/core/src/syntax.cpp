#include "hybcore/syntax.hpp"

#include <cassert>

namespace hybcore {

Ty Ty::prod(Ty a, Ty b) {
    Ty t(TyKind::Prod);
    t.comps_ = std::make_shared<const std::pair<Ty, Ty>>(std::move(a), std::move(b));
    return t;
}

bool Ty::operator==(const Ty& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ != TyKind::Prod) return true;
    return left() == other.left() && right() == other.right();
}

std::string Ty::str() const {
    switch (kind_) {
        case TyKind::Nat: return "nat";
        case TyKind::Real: return "real";
        case TyKind::Unit: return "unit";
        case TyKind::Bool: return "bool";
        case TyKind::Prod: {
            auto wrap = [](const Ty& t) {
                return t.is_prod() ? "(" + t.str() + ")" : t.str();
            };
            return wrap(left()) + " x " + wrap(right());
        }
    }
    return "?";
}

ValuePtr v_var(std::string name) {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::Var;
    t->name = std::move(name);
    return t;
}

ValuePtr v_star() {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::Star;
    return t;
}

ValuePtr v_true() {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::True;
    return t;
}

ValuePtr v_false() {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::False;
    return t;
}

ValuePtr v_bool(bool b) { return b ? v_true() : v_false(); }

ValuePtr v_real(double r) {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::RealLit;
    t->real_val = r;
    return t;
}

ValuePtr v_nat(std::uint64_t n) {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::NatLit;
    t->nat_val = n;
    return t;
}

ValuePtr v_pair(ValuePtr a, ValuePtr b) {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::Pair;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

ValuePtr v_sig(std::string symbol, ValuePtr arg) {
    auto t = std::make_shared<ValueTerm>();
    t->kind = ValueKind::SigApp;
    t->name = std::move(symbol);
    t->a = std::move(arg);
    return t;
}

CompPtr c_now(ValuePtr v) {
    auto t = std::make_shared<CompTerm>();
    t->kind = CompKind::Now;
    t->val = std::move(v);
    return t;
}

CompPtr c_seq(std::string x, CompPtr p, CompPtr q) {
    auto t = std::make_shared<CompTerm>();
    t->kind = CompKind::Seq;
    t->binder = std::move(x);
    t->p = std::move(p);
    t->q = std::move(q);
    return t;
}

CompPtr c_pairmatch(std::string x, std::string y, ValuePtr v, CompPtr body) {
    auto t = std::make_shared<CompTerm>();
    t->kind = CompKind::PairMatch;
    t->binder = std::move(x);
    t->binder2 = std::move(y);
    t->val = std::move(v);
    t->p = std::move(body);
    return t;
}

CompPtr c_if(ValuePtr cond, CompPtr then_branch, CompPtr else_branch) {
    auto t = std::make_shared<CompTerm>();
    t->kind = CompKind::If;
    t->val = std::move(cond);
    t->p = std::move(then_branch);
    t->q = std::move(else_branch);
    return t;
}

CompPtr c_while(std::string x, CompPtr init, ValuePtr guard, CompPtr body) {
    auto t = std::make_shared<CompTerm>();
    t->kind = CompKind::While;
    t->binder = std::move(x);
    t->p = std::move(init);
    t->val = std::move(guard);
    t->q = std::move(body);
    return t;
}

CompPtr c_traj(std::string time_binder, ValuePtr v, std::string state_binder, ValuePtr guard) {
    auto t = std::make_shared<CompTerm>();
    t->kind = CompKind::Traj;
    t->binder = std::move(time_binder);
    t->binder2 = std::move(state_binder);
    t->val = std::move(v);
    t->val2 = std::move(guard);
    return t;
}

const Ty* Context::lookup(const std::string& name) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->first == name) return &it->second;
    return nullptr;
}

bool Context::is_nonrepetitive() const {
    std::set<std::string> seen;
    for (const auto& [n, _] : entries_)
        if (!seen.insert(n).second) return false;
    return true;
}

namespace {

Subst without(const Subst& s, std::initializer_list<std::string> names) {
    Subst out = s;
    for (const auto& n : names) out.erase(n);
    return out;
}

}  // namespace

ValuePtr substitute(const ValuePtr& term, const Subst& subst) {
    if (subst.empty()) return term;
    switch (term->kind) {
        case ValueKind::Var: {
            auto it = subst.find(term->name);
            return it != subst.end() ? it->second : term;
        }
        case ValueKind::Star:
        case ValueKind::True:
        case ValueKind::False:
        case ValueKind::RealLit:
        case ValueKind::NatLit:
            return term;
        case ValueKind::Pair:
            return v_pair(substitute(term->a, subst), substitute(term->b, subst));
        case ValueKind::SigApp:
            return v_sig(term->name, substitute(term->a, subst));
    }
    return term;
}

CompPtr substitute(const CompPtr& term, const Subst& subst) {
    if (subst.empty()) return term;
    switch (term->kind) {
        case CompKind::Now:
            return c_now(substitute(term->val, subst));
        case CompKind::Seq:
            return c_seq(term->binder, substitute(term->p, subst),
                         substitute(term->q, without(subst, {term->binder})));
        case CompKind::PairMatch:
            return c_pairmatch(term->binder, term->binder2, substitute(term->val, subst),
                               substitute(term->p, without(subst, {term->binder, term->binder2})));
        case CompKind::If:
            return c_if(substitute(term->val, subst), substitute(term->p, subst),
                        substitute(term->q, subst));
        case CompKind::While: {
            Subst inner = without(subst, {term->binder});
            return c_while(term->binder, substitute(term->p, subst),
                           substitute(term->val, inner), substitute(term->q, inner));
        }
        case CompKind::Traj:
            return c_traj(term->binder, substitute(term->val, without(subst, {term->binder})),
                          term->binder2, substitute(term->val2, without(subst, {term->binder2})));
    }
    return term;
}

namespace {

void collect_free(const ValuePtr& term, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (term->kind) {
        case ValueKind::Var:
            if (!bound.count(term->name)) out.insert(term->name);
            return;
        case ValueKind::Pair:
            collect_free(term->a, bound, out);
            collect_free(term->b, bound, out);
            return;
        case ValueKind::SigApp:
            collect_free(term->a, bound, out);
            return;
        default:
            return;
    }
}

// Scoped bound-set modification. Remembers whether the name was already bound.
struct BoundGuard {
    std::set<std::string>& bound;
    std::string name;
    bool was_bound;
    BoundGuard(std::set<std::string>& b, std::string n) : bound(b), name(std::move(n)) {
        was_bound = !bound.insert(name).second;
    }
    ~BoundGuard() {
        if (!was_bound) bound.erase(name);
    }
};

void collect_free(const CompPtr& term, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (term->kind) {
        case CompKind::Now:
            collect_free(term->val, bound, out);
            return;
        case CompKind::Seq: {
            collect_free(term->p, bound, out);
            BoundGuard g(bound, term->binder);
            collect_free(term->q, bound, out);
            return;
        }
        case CompKind::PairMatch: {
            collect_free(term->val, bound, out);
            BoundGuard g1(bound, term->binder);
            BoundGuard g2(bound, term->binder2);
            collect_free(term->p, bound, out);
            return;
        }
        case CompKind::If:
            collect_free(term->val, bound, out);
            collect_free(term->p, bound, out);
            collect_free(term->q, bound, out);
            return;
        case CompKind::While: {
            collect_free(term->p, bound, out);
            BoundGuard g(bound, term->binder);
            collect_free(term->val, bound, out);
            collect_free(term->q, bound, out);
            return;
        }
        case CompKind::Traj: {
            {
                BoundGuard g(bound, term->binder);
                collect_free(term->val, bound, out);
            }
            {
                BoundGuard g(bound, term->binder2);
                collect_free(term->val2, bound, out);
            }
            return;
        }
    }
}

}  // namespace

std::set<std::string> free_vars(const ValuePtr& term) {
    std::set<std::string> bound, out;
    collect_free(term, bound, out);
    return out;
}

std::set<std::string> free_vars(const CompPtr& term) {
    std::set<std::string> bound, out;
    collect_free(term, bound, out);
    return out;
}

bool is_closed(const ValuePtr& term) { return free_vars(term).empty(); }
bool is_closed(const CompPtr& term) { return free_vars(term).empty(); }

bool term_eq(const ValuePtr& a, const ValuePtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ValueKind::Var: return a->name == b->name;
        case ValueKind::Star:
        case ValueKind::True:
        case ValueKind::False: return true;
        case ValueKind::RealLit: return a->real_val == b->real_val;
        case ValueKind::NatLit: return a->nat_val == b->nat_val;
        case ValueKind::Pair: return term_eq(a->a, b->a) && term_eq(a->b, b->b);
        case ValueKind::SigApp: return a->name == b->name && term_eq(a->a, b->a);
    }
    return false;
}

bool term_eq(const CompPtr& a, const CompPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case CompKind::Now:
            return term_eq(a->val, b->val);
        case CompKind::Seq:
            return a->binder == b->binder && term_eq(a->p, b->p) && term_eq(a->q, b->q);
        case CompKind::PairMatch:
            return a->binder == b->binder && a->binder2 == b->binder2 &&
                   term_eq(a->val, b->val) && term_eq(a->p, b->p);
        case CompKind::If:
            return term_eq(a->val, b->val) && term_eq(a->p, b->p) && term_eq(a->q, b->q);
        case CompKind::While:
            return a->binder == b->binder && term_eq(a->p, b->p) && term_eq(a->val, b->val) &&
                   term_eq(a->q, b->q);
        case CompKind::Traj:
            return a->binder == b->binder && a->binder2 == b->binder2 &&
                   term_eq(a->val, b->val) && term_eq(a->val2, b->val2);
    }
    return false;
}

}  // namespace hybcore

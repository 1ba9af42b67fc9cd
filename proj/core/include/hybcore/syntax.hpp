#ifndef HYBCORE_SYNTAX_HPP
#define HYBCORE_SYNTAX_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hybcore {

// ---------------------------------------------------------------------------
// Types: Nat | Real | Unit | Bool | A x B
// ---------------------------------------------------------------------------

enum class TyKind { Nat, Real, Unit, Bool, Prod };

class Ty {
public:
    Ty() : kind_(TyKind::Unit) {}

    static Ty nat() { return Ty(TyKind::Nat); }
    static Ty real() { return Ty(TyKind::Real); }
    static Ty unit() { return Ty(TyKind::Unit); }
    static Ty boolean() { return Ty(TyKind::Bool); }
    static Ty prod(Ty a, Ty b);

    TyKind kind() const { return kind_; }
    bool is_prod() const { return kind_ == TyKind::Prod; }
    const Ty& left() const { return comps_->first; }
    const Ty& right() const { return comps_->second; }

    bool operator==(const Ty& other) const;
    bool operator!=(const Ty& other) const { return !(*this == other); }

    std::string str() const;

private:
    explicit Ty(TyKind k) : kind_(k) {}
    TyKind kind_;
    std::shared_ptr<const std::pair<Ty, Ty>> comps_;  // Prod only
};

// ---------------------------------------------------------------------------
// Value terms.
//
// Beyond the variable/star/true/false/pair/symbol constructors, closed
// numeric literals are first-class: the operational rules substitute
// computed durations and results back into terms (q[v/x], v[d/t]), so real
// and natural constants must be expressible as terms.
// ---------------------------------------------------------------------------

struct ValueTerm;
using ValuePtr = std::shared_ptr<const ValueTerm>;

enum class ValueKind { Var, Star, True, False, RealLit, NatLit, Pair, SigApp };

struct ValueTerm {
    ValueKind kind;
    std::string name;        // Var name, or SigApp symbol
    double real_val = 0.0;   // RealLit
    std::uint64_t nat_val = 0;  // NatLit
    ValuePtr a, b;           // Pair(a, b); SigApp argument in a
};

ValuePtr v_var(std::string name);
ValuePtr v_star();
ValuePtr v_true();
ValuePtr v_false();
ValuePtr v_bool(bool b);
ValuePtr v_real(double r);
ValuePtr v_nat(std::uint64_t n);
ValuePtr v_pair(ValuePtr a, ValuePtr b);
ValuePtr v_sig(std::string symbol, ValuePtr arg);

// ---------------------------------------------------------------------------
// Computation terms.
// ---------------------------------------------------------------------------

struct CompTerm;
using CompPtr = std::shared_ptr<const CompTerm>;

enum class CompKind { Now, Seq, PairMatch, If, While, Traj };

struct CompTerm {
    CompKind kind;
    // Now:       val
    // Seq:       binder, p, q                 (x := p; q)
    // PairMatch: binder, binder2, val, p      (let (x, y) = val in p)
    // If:        val, p, q
    // While:     binder, p (init), val (guard, sees binder), q (body)
    // Traj:      binder (time), val (sees time binder),
    //            binder2 (state), val2 (guard, sees state binder)
    std::string binder, binder2;
    ValuePtr val, val2;
    CompPtr p, q;
};

CompPtr c_now(ValuePtr v);
CompPtr c_seq(std::string x, CompPtr p, CompPtr q);
CompPtr c_pairmatch(std::string x, std::string y, ValuePtr v, CompPtr body);
CompPtr c_if(ValuePtr cond, CompPtr then_branch, CompPtr else_branch);
CompPtr c_while(std::string x, CompPtr init, ValuePtr guard, CompPtr body);
CompPtr c_traj(std::string time_binder, ValuePtr v, std::string state_binder, ValuePtr guard);

// ---------------------------------------------------------------------------
// Typing contexts: ordered, names pairwise distinct at the top level.
// Extension during checking shadows (innermost binding wins on lookup).
// ---------------------------------------------------------------------------

class Context {
public:
    Context() = default;

    void push(std::string name, Ty ty) { entries_.emplace_back(std::move(name), std::move(ty)); }
    const Ty* lookup(const std::string& name) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::pair<std::string, Ty>>& entries() const { return entries_; }

    // Top-level contexts must be non-repetitive.
    bool is_nonrepetitive() const;

private:
    std::vector<std::pair<std::string, Ty>> entries_;
};

// ---------------------------------------------------------------------------
// Substitution and free variables.
//
// Substituted values must be closed; binders are respected, so capture
// cannot occur and no alpha-renaming is needed.
// ---------------------------------------------------------------------------

using Subst = std::map<std::string, ValuePtr>;

ValuePtr substitute(const ValuePtr& term, const Subst& subst);
CompPtr substitute(const CompPtr& term, const Subst& subst);

std::set<std::string> free_vars(const ValuePtr& term);
std::set<std::string> free_vars(const CompPtr& term);

bool is_closed(const ValuePtr& term);
bool is_closed(const CompPtr& term);

// Structural equality.
bool term_eq(const ValuePtr& a, const ValuePtr& b);
bool term_eq(const CompPtr& a, const CompPtr& b);

}  // namespace hybcore

#endif

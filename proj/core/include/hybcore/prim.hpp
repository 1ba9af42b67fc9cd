#ifndef HYBCORE_PRIM_HPP
#define HYBCORE_PRIM_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "hybcore/rtval.hpp"
#include "hybcore/syntax.hpp"

namespace hybcore {

// ---------------------------------------------------------------------------
// Faults raised while evaluating signature symbols (division by zero etc.).
// Distinct from divergence: a fault aborts the run, divergence is a result.
// ---------------------------------------------------------------------------

struct RuntimeFault : std::runtime_error {
    explicit RuntimeFault(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Signature: typed operation symbols with evaluation functions.
// Most entries are monomorphic A -> B with B in {nat, real, bool}; fst/snd
// are component projections typed structurally.
// ---------------------------------------------------------------------------

struct SigEntry {
    // Returns the result type for a given argument type, or nullopt on
    // mismatch.
    std::function<std::optional<Ty>(const Ty&)> type_of;
    std::function<RtVal(const RtVal&)> eval;
};

class Signature {
public:
    void add(std::string name, SigEntry entry) { table_[std::move(name)] = std::move(entry); }
    void add_mono(const std::string& name, Ty arg, Ty result,
                  std::function<RtVal(const RtVal&)> eval);
    const SigEntry* find(const std::string& name) const {
        auto it = table_.find(name);
        return it == table_.end() ? nullptr : &it->second;
    }

private:
    std::map<std::string, SigEntry> table_;
};

// Arithmetic, comparisons, logical connectives, projections, rounding, and
// the closed-form ODE solution symbols used by the program corpus.
const Signature& builtin_signature();

// ---------------------------------------------------------------------------
// Evaluation parameters: every numeric budget/tolerance knob in one place.
// ---------------------------------------------------------------------------

struct EvalParams {
    int max_unfold = 10000;      // loop/step unfolding budget
    double zeno_eps = 1e-9;      // vanishing-increment threshold
    int zeno_window = 64;        // increments inspected for the Zeno test
    double grid_step = 1e-3;     // boundary forward-scan step
    double boundary_tol = 1e-9;  // bisection tolerance
    double horizon = 1e6;        // scan horizon; beyond it a trajectory counts as infinite
    double seq_check_step = 1e-3;  // sampling step for continuum side conditions
};

// ---------------------------------------------------------------------------
// Time-indexed value: a value term with one distinguished real binder over a
// captured environment.
// ---------------------------------------------------------------------------

struct TimeFun {
    ValuePtr term;
    std::string binder;
    Env env;

    RtVal at(double t) const;
};

RtVal eval_value(const Env& env, const ValuePtr& v);

// Shortest round-trip decimal form; infinities print as "inf"/"-inf".
std::string format_real(double d);

// ---------------------------------------------------------------------------
// Boundary of a guarded trajectory: d = sup{ e <= horizon | b holds on [0,e] }.
// closed == true iff the predicate still holds at d.
// ---------------------------------------------------------------------------

struct Boundary {
    double d = 0.0;  // may be +inf
    bool closed = false;
};

// Resolution of a bisection bracket that has narrowed to adjacent doubles,
// with the predicate still true at lo and false at hi. The boundary is
// reported closed unless hi is decisively the exactly-representable flip
// point (a long run of trailing zero bits), which is the signature of a
// strict threshold such as x < 1 failing exactly at 1.
struct SnapResult {
    double d;
    bool closed;
};
SnapResult snap_boundary(double lo, double hi);

// Forward grid scan (geometrically accelerated past the first window) and
// bisection down to adjacent doubles, resolved by snap_boundary. Total by
// construction.
Boundary find_boundary(const TimeFun& h, const std::function<bool(const RtVal&)>& pred,
                       const EvalParams& params);

// Convenience: predicate given as a guard term over a state binder.
Boundary find_boundary(const TimeFun& h, const ValuePtr& guard, const std::string& state_binder,
                       const Env& env, const EvalParams& params);

}  // namespace hybcore

#endif

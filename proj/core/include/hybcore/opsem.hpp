#ifndef HYBCORE_OPSEM_HPP
#define HYBCORE_OPSEM_HPP

#include <map>
#include <optional>
#include <string>

#include "hybcore/duration_monad.hpp"
#include "hybcore/prim.hpp"
#include "hybcore/syntax.hpp"

namespace hybcore {

// ---------------------------------------------------------------------------
// Small-step results: a timed reduction, a timed divergence, or a terminal
// `ret v` (which is not one-step reducible).
// ---------------------------------------------------------------------------

struct StepResult {
    enum class Kind { Step, Diverge, Terminal };
    Kind kind;
    double dur = 0.0;       // Step duration, or divergence time (may be inf)
    CompPtr next;           // Step
    ValuePtr terminal;      // Terminal
};

// ---------------------------------------------------------------------------
// Big-step outcomes with the divergence taxonomy: non-progressive
// divergence stalls at total time zero, Zeno divergence accumulates a
// finite positive time over infinitely many unfoldings, progressive
// divergence runs forever in time. Exhausted marks inconclusive budget
// cut-offs.
// ---------------------------------------------------------------------------

enum class DivergeKind { nonprogressive, progressive, zeno, exhausted };

std::string diverge_kind_str(DivergeKind k);

struct BigStepOutcome {
    bool converged = false;
    double dur = 0.0;       // finite when converged
    ValuePtr value;         // converged: closed value term in literal form
    DivergeKind kind = DivergeKind::nonprogressive;

    static BigStepOutcome converge(double d, ValuePtr v) {
        BigStepOutcome o;
        o.converged = true;
        o.dur = d;
        o.value = std::move(v);
        return o;
    }
    static BigStepOutcome diverge(double d, DivergeKind k) {
        BigStepOutcome o;
        o.dur = d;
        o.kind = k;
        return o;
    }
    bool is_exhausted() const { return !converged && kind == DivergeKind::exhausted; }
    std::string str() const;
};

struct EvoResult {
    std::optional<RtVal> value;

    static EvoResult at(RtVal v) { return EvoResult{std::move(v)}; }
    static EvoResult undefined() { return EvoResult{}; }
    bool defined() const { return value.has_value(); }
};

// ---------------------------------------------------------------------------
// Evaluator: one session over a fixed parameter set. Big-step results are
// memoized per term object (terms are immutable), which keeps the
// continuum side-condition checks of the evolution semantics tractable.
// ---------------------------------------------------------------------------

class Evaluator {
public:
    explicit Evaluator(EvalParams params = {}) : params_(std::move(params)) {}

    const EvalParams& params() const { return params_; }

    // One small-step reduction.
    StepResult ss_step(const CompPtr& p);

    // Reflexive-transitive closure of ss_step with duration accumulation.
    BigStepOutcome ss_run(const CompPtr& p);

    // Big-step duration semantics; while-loops by structural unfolding.
    BigStepOutcome bs_duration(const CompPtr& p);

    // Big-step evolution semantics: the value of p at time t, if any.
    EvoResult evo_eval(const CompPtr& p, double t);

private:
    EvalParams params_;
    std::map<CompPtr, BigStepOutcome> bs_cache_;

    BigStepOutcome bs_uncached(const CompPtr& p);
};

// Stateless conveniences.
BigStepOutcome bs_duration(const CompPtr& p, const EvalParams& params = {});
BigStepOutcome ss_run(const CompPtr& p, const EvalParams& params = {});
EvoResult evo_eval(const CompPtr& p, double t, const EvalParams& params = {});

// Divergence class of a directly observed divergence time.
DivergeKind kind_by_dur(double d);

// Shared mapping from budget classification to a divergence outcome.
BigStepOutcome outcome_of_sum(const SumOutcome& so);

}  // namespace hybcore

#endif

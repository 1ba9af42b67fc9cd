#ifndef HYBCORE_RTVAL_HPP
#define HYBCORE_RTVAL_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "hybcore/syntax.hpp"

namespace hybcore {

// ---------------------------------------------------------------------------
// Runtime values. Program values never hold NaN/inf reals; extended
// durations live outside RtVal.
// ---------------------------------------------------------------------------

enum class RtKind { Unit, Bool, Nat, Real, Pair };

struct RtVal {
    RtKind kind = RtKind::Unit;
    bool b = false;
    std::uint64_t n = 0;
    double r = 0.0;
    std::shared_ptr<const std::pair<RtVal, RtVal>> pr;

    static RtVal unit() { return RtVal{}; }
    static RtVal boolean(bool v) {
        RtVal x; x.kind = RtKind::Bool; x.b = v; return x;
    }
    static RtVal nat(std::uint64_t v) {
        RtVal x; x.kind = RtKind::Nat; x.n = v; return x;
    }
    static RtVal real(double v) {
        RtVal x; x.kind = RtKind::Real; x.r = v; return x;
    }
    static RtVal pair(RtVal a, RtVal b) {
        RtVal x; x.kind = RtKind::Pair;
        x.pr = std::make_shared<const std::pair<RtVal, RtVal>>(std::move(a), std::move(b));
        return x;
    }

    const RtVal& first() const { return pr->first; }
    const RtVal& second() const { return pr->second; }
};

bool rt_eq(const RtVal& a, const RtVal& b);

// Componentwise comparison with absolute tolerance on reals; exact elsewhere.
bool rt_close(const RtVal& a, const RtVal& b, double tol);

std::string rt_str(const RtVal& v);

// Embed a runtime value back into term syntax as a closed literal value.
ValuePtr rt_to_term(const RtVal& v);

using Env = std::map<std::string, RtVal>;

}  // namespace hybcore

#endif

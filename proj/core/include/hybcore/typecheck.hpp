#ifndef HYBCORE_TYPECHECK_HPP
#define HYBCORE_TYPECHECK_HPP

#include <stdexcept>
#include <string>

#include "hybcore/prim.hpp"
#include "hybcore/syntax.hpp"

namespace hybcore {

struct TypeError : std::runtime_error {
    enum class Kind {
        UnboundVariable,
        UnknownSymbol,
        ArgumentTypeMismatch,
        GuardNotBool,
        BranchTypeMismatch,
        LoopTypeMismatch,
        ScrutineeNotPair,
    };
    Kind kind;
    TypeError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Judgement forms: Gamma |-v v : A and Gamma |-c p : A. Rules are
// syntax-directed; when inference succeeds the derivation is unique.
Ty infer_value(const Context& ctx, const ValuePtr& v, const Signature& sig = builtin_signature());
Ty infer_comp(const Context& ctx, const CompPtr& p, const Signature& sig = builtin_signature());

}  // namespace hybcore

#endif

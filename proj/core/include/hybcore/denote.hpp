#ifndef HYBCORE_DENOTE_HPP
#define HYBCORE_DENOTE_HPP

#include <functional>

#include "hybcore/duration_monad.hpp"
#include "hybcore/hybrid_monad.hpp"
#include "hybcore/rtval.hpp"
#include "hybcore/syntax.hpp"

namespace hybcore {

// Denotations are compiled once into closures over environments keyed by
// the context's variable names. They expect well-typed input.

using DenV = std::function<RtVal(const Env&)>;
using DenQ = std::function<QRes<RtVal>(const Env&)>;
using DenH = std::function<Traj<RtVal>(const Env&)>;

DenV denote_value(const ValuePtr& v);

// Duration semantics: environment -> timed result or divergence time.
DenQ denote_q(const CompPtr& p, const EvalParams& params = {});

// Evolution semantics: environment -> trajectory.
DenH denote_h(const CompPtr& p, const EvalParams& params = {});

}  // namespace hybcore

#endif

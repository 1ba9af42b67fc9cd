#ifndef HYBCORE_GENERATE_HPP
#define HYBCORE_GENERATE_HPP

#include <random>

#include "hybcore/syntax.hpp"

namespace hybcore {

// Random closed well-typed programs of type real, built from dyadic
// constants, convergent/divergent loop shapes and monotone-threshold
// trajectories, so boundaries stay bisection-friendly and duration sums
// stay exactly representable.
CompPtr gen_program(std::mt19937_64& rng, int max_depth = 4);

}  // namespace hybcore

#endif

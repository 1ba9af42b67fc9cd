#ifndef HYBCORE_FRONTEND_HPP
#define HYBCORE_FRONTEND_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "hybcore/syntax.hpp"

namespace hybcore {

struct ParseError : std::runtime_error {
    int line = 0;
    int col = 0;
    std::vector<std::string> expected;

    ParseError(const std::string& msg, int line_, int col_,
               std::vector<std::string> expected_ = {})
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), col(col_), expected(std::move(expected_)) {}
};

// Parses concrete syntax into a core computation term with all sugar
// expanded: tail assignments, pair patterns, `wait`, and the bounded
// `evolve ... for r` form. Sequencing is right associative.
CompPtr parse(const std::string& text);

// Prints a core term; parse(pretty(p)) is structurally equal to p.
std::string pretty(const CompPtr& p);
std::string pretty(const ValuePtr& v);

}  // namespace hybcore

#endif

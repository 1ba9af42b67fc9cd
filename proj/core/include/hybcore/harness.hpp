#ifndef HYBCORE_HARNESS_HPP
#define HYBCORE_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "hybcore/opsem.hpp"
#include "hybcore/rtval.hpp"
#include "hybcore/syntax.hpp"

namespace hybcore {

// ---------------------------------------------------------------------------
// Time grids.
// ---------------------------------------------------------------------------

struct Grid {
    double start = 0.0;
    double stop = 3.0;
    double step = 0.1;

    std::vector<double> points() const;
};

// Parses "start:stop:step".
std::optional<Grid> parse_grid(const std::string& spec);

// ---------------------------------------------------------------------------
// Taxonomy of loop behaviours.
// ---------------------------------------------------------------------------

enum class Taxonomy {
    convergent_nonprogressive,
    convergent_progressive,
    divergent_nonprogressive,
    divergent_progressive,
    zeno,
    unknown,
};

std::string taxonomy_str(Taxonomy t);
Taxonomy classify_outcome(const BigStepOutcome& o);
Taxonomy classify(const CompPtr& p, const EvalParams& params = {});

// ---------------------------------------------------------------------------
// Trajectory sampling.
// ---------------------------------------------------------------------------

struct SampleRow {
    double t = 0.0;
    std::optional<RtVal> value;
};

// Samples the program's trajectory on the grid via the denotational
// evolution semantics, or via the operational one when use_evo is set.
std::vector<SampleRow> sample(const CompPtr& p, const Grid& grid, const EvalParams& params,
                              bool use_evo = false);

// CSV with header "t,<field...>"; pair components flatten to dotted column
// names, undefined points leave empty cells, infinities print as "inf".
std::string rows_to_csv(const std::vector<SampleRow>& rows, const Ty& value_type);

// ---------------------------------------------------------------------------
// Conformance checking: the soundness/adequacy statements as executable
// comparisons.
// ---------------------------------------------------------------------------

struct ProgramCheck {
    std::string program;
    std::string taxonomy;
    bool inconclusive = false;   // an exhausted outcome excluded the check
    bool duration_agree = true;
    double duration_delta = 0.0;
    bool value_agree = true;
    bool smallstep_agree = true;
    int evo_points = 0;
    int evo_mismatches = 0;
    bool hcc_agree = true;
    bool fault = false;
    std::vector<std::string> notes;

    bool ok() const {
        return !fault && duration_agree && value_agree && smallstep_agree &&
               evo_mismatches == 0 && hcc_agree;
    }
};

// Runs all semantics on one closed program and populates the agreement
// fields; grid supplies the evolution sampling points.
ProgramCheck check_adequacy(const std::string& name, const CompPtr& p, const Grid& grid,
                            const EvalParams& params, double tol = 1e-6);

struct ConformanceReport {
    std::vector<ProgramCheck> programs;
    int random_total = 0;
    int random_mismatched = 0;
    int random_exhausted = 0;
    std::vector<std::string> fixture_failures;

    bool ok() const {
        if (random_mismatched > 0 || !fixture_failures.empty()) return false;
        for (const auto& c : programs)
            if (!c.ok()) return false;
        return true;
    }
};

// Checks every .hc file in the directory (honoring expected.json fixtures
// when present) plus `random_n` generated programs.
ConformanceReport conform_dir(const std::string& dir, int random_n, std::uint64_t seed,
                              const EvalParams& params);

std::string conformance_json(const ConformanceReport& r);

// ---------------------------------------------------------------------------
// Run reports.
// ---------------------------------------------------------------------------

struct RunReport {
    std::string program;
    std::string semantics;
    std::string outcome_kind;             // Converged/Diverged/Done/Diverge/sampled
    double duration = 0.0;
    std::optional<std::string> value;
    std::optional<std::string> taxonomy;
    EvalParams params;
    std::vector<std::string> mismatches;
};

std::string report_json(const RunReport& r);

// Reads and parses one .hc file (throws ParseError/TypeError on bad input).
CompPtr load_program(const std::string& path);

}  // namespace hybcore

#endif

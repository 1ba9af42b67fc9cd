#include "hybcore/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hybcore/denote.hpp"
#include "hybcore/frontend.hpp"
#include "hybcore/generate.hpp"
#include "hybcore/typecheck.hpp"

namespace hybcore {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> Grid::points() const {
    std::vector<double> out;
    if (step <= 0) return out;
    for (int i = 0;; ++i) {
        double t = start + i * step;
        if (t > stop + step * 1e-9) break;
        out.push_back(std::min(t, stop));
    }
    return out;
}

std::optional<Grid> parse_grid(const std::string& spec) {
    Grid g;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> g.start >> c1 >> g.stop >> c2 >> g.step) || c1 != ':' || c2 != ':') {
        return std::nullopt;
    }
    if (g.step <= 0 || g.stop < g.start) return std::nullopt;
    return g;
}

std::string taxonomy_str(Taxonomy t) {
    switch (t) {
        case Taxonomy::convergent_nonprogressive: return "convergent-nonprogressive";
        case Taxonomy::convergent_progressive: return "convergent-progressive";
        case Taxonomy::divergent_nonprogressive: return "divergent-nonprogressive";
        case Taxonomy::divergent_progressive: return "divergent-progressive";
        case Taxonomy::zeno: return "zeno";
        case Taxonomy::unknown: return "unknown";
    }
    return "?";
}

Taxonomy classify_outcome(const BigStepOutcome& o) {
    if (o.converged)
        return o.dur > 0 ? Taxonomy::convergent_progressive
                         : Taxonomy::convergent_nonprogressive;
    switch (o.kind) {
        case DivergeKind::nonprogressive: return Taxonomy::divergent_nonprogressive;
        case DivergeKind::progressive: return Taxonomy::divergent_progressive;
        case DivergeKind::zeno: return Taxonomy::zeno;
        case DivergeKind::exhausted: return Taxonomy::unknown;
    }
    return Taxonomy::unknown;
}

Taxonomy classify(const CompPtr& p, const EvalParams& params) {
    return classify_outcome(bs_duration(p, params));
}

std::vector<SampleRow> sample(const CompPtr& p, const Grid& grid, const EvalParams& params,
                              bool use_evo) {
    std::vector<SampleRow> rows;
    if (use_evo) {
        Evaluator ev(params);
        for (double t : grid.points()) {
            EvoResult r = ev.evo_eval(p, t);
            rows.push_back({t, r.value});
        }
        return rows;
    }
    Traj<RtVal> T = denote_h(p, params)({});
    for (double t : grid.points()) {
        auto r = eval_traj(T, t);
        rows.push_back({t, r.value});
    }
    return rows;
}

namespace {

void flatten_headers(const Ty& ty, const std::string& base, std::vector<std::string>& out) {
    if (ty.is_prod()) {
        flatten_headers(ty.left(), base + ".0", out);
        flatten_headers(ty.right(), base + ".1", out);
    } else {
        out.push_back(base);
    }
}

void flatten_value(const RtVal& v, std::vector<std::string>& out) {
    switch (v.kind) {
        case RtKind::Pair:
            flatten_value(v.first(), out);
            flatten_value(v.second(), out);
            return;
        case RtKind::Real: out.push_back(format_real(v.r)); return;
        case RtKind::Nat: out.push_back(std::to_string(v.n)); return;
        case RtKind::Bool: out.push_back(v.b ? "true" : "false"); return;
        case RtKind::Unit: out.push_back("*"); return;
    }
}

std::size_t count_fields(const Ty& ty) {
    if (ty.is_prod()) return count_fields(ty.left()) + count_fields(ty.right());
    return 1;
}

}  // namespace

std::string rows_to_csv(const std::vector<SampleRow>& rows, const Ty& value_type) {
    std::vector<std::string> headers;
    flatten_headers(value_type, "v", headers);
    std::string out = "t";
    for (const auto& h : headers) out += "," + h;
    out += "\n";
    for (const auto& row : rows) {
        out += format_real(row.t);
        if (row.value) {
            std::vector<std::string> cells;
            flatten_value(*row.value, cells);
            for (const auto& c : cells) out += "," + c;
        } else {
            for (std::size_t i = 0; i < headers.size(); ++i) out += ",";
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adequacy checking
// ---------------------------------------------------------------------------

namespace {

bool durations_close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
}

}  // namespace

ProgramCheck check_adequacy(const std::string& name, const CompPtr& p, const Grid& grid,
                            const EvalParams& params, double tol) {
    ProgramCheck check;
    check.program = name;
    try {
        Evaluator ev(params);

        BigStepOutcome bs = ev.bs_duration(p);
        check.taxonomy = taxonomy_str(classify_outcome(bs));

        // Small-step closure versus big-step duration.
        BigStepOutcome ss = ev.ss_run(p);
        if (bs.is_exhausted() || ss.is_exhausted()) {
            check.inconclusive = true;
        } else {
            if (ss.converged != bs.converged || !durations_close(ss.dur, bs.dur, tol)) {
                check.smallstep_agree = false;
                check.notes.push_back("small-step " + ss.str() + " vs big-step " + bs.str());
            } else if (ss.converged && !term_eq(ss.value, bs.value)) {
                check.smallstep_agree = false;
                check.notes.push_back("small-step value " + pretty(ss.value) +
                                      " vs big-step value " + pretty(bs.value));
            }
        }

        // Big-step duration versus the duration monad denotation.
        QRes<RtVal> q = denote_q(p, params)({});
        if (!bs.is_exhausted() && !q.exhausted) {
            check.duration_delta =
                std::isinf(bs.dur) && std::isinf(q.dur) ? 0.0 : std::abs(bs.dur - q.dur);
            if (bs.converged != q.is_done() || !durations_close(bs.dur, q.dur, tol)) {
                check.duration_agree = false;
                check.notes.push_back("big-step " + bs.str() + " vs denotation dur " +
                                      format_real(q.dur));
            } else if (bs.converged &&
                       !rt_close(eval_value({}, bs.value), *q.value, tol)) {
                check.value_agree = false;
                check.notes.push_back("big-step value " + pretty(bs.value) +
                                      " vs denotation value " + rt_str(*q.value));
            }
        } else {
            check.inconclusive = true;
        }

        // Evolution semantics versus the hybrid monad denotation, pointwise.
        Traj<RtVal> T = denote_h(p, params)({});
        for (double t : grid.points()) {
            auto dv = eval_traj(T, t);
            if (dv.truncated_gap) continue;  // beyond the materialized prefix
            EvoResult ov = ev.evo_eval(p, t);
            ++check.evo_points;
            if (dv.value.has_value() != ov.defined()) {
                ++check.evo_mismatches;
                check.notes.push_back("t=" + format_real(t) + ": evolution " +
                                      (ov.defined() ? rt_str(*ov.value) : "undefined") +
                                      " vs trajectory " +
                                      (dv.value ? rt_str(*dv.value) : "undefined"));
            } else if (dv.value && !rt_close(*dv.value, *ov.value, tol)) {
                ++check.evo_mismatches;
                check.notes.push_back("t=" + format_real(t) + ": evolution " +
                                      rt_str(*ov.value) + " vs trajectory " +
                                      rt_str(*dv.value));
            }
        }

        // Endpoint agreement between the two denotations: the trajectory
        // is closed convergent exactly when the duration semantics
        // converges, with matching duration and endpoint value.
        if (!q.exhausted && !(T.truncated && T.trunc_kind == TruncationKind::exhausted)) {
            bool tags_match = (T.tag == TrajTag::cc) == q.is_done();
            if (T.tag == TrajTag::cc && q.is_done()) {
                tags_match = durations_close(T.dur, q.dur, tol);
                auto end = eval_traj(T, T.dur);
                if (tags_match && end.value && !rt_close(*end.value, *q.value, tol))
                    tags_match = false;
            }
            if (!tags_match) {
                check.hcc_agree = false;
                check.notes.push_back("H tag/duration disagrees with Q result");
            }
        }
    } catch (const RuntimeFault& e) {
        check.fault = true;
        check.notes.push_back(std::string("runtime fault: ") + e.what());
    }
    return check;
}

// ---------------------------------------------------------------------------
// Corpus conformance
// ---------------------------------------------------------------------------

CompPtr load_program(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file " + path, 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    CompPtr p = parse(buf.str());
    infer_comp(Context{}, p);
    return p;
}

ConformanceReport conform_dir(const std::string& dir, int random_n, std::uint64_t seed,
                              const EvalParams& base_params) {
    ConformanceReport report;

    json fixtures;
    fs::path fixture_path = fs::path(dir) / "expected.json";
    if (fs::exists(fixture_path)) {
        std::ifstream in(fixture_path);
        in >> fixtures;
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".hc") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        std::string name = file.filename().string();
        EvalParams params = base_params;
        Grid grid;
        json fx;
        if (fixtures.contains(name)) {
            fx = fixtures[name];
            if (fx.contains("max_unfold")) params.max_unfold = fx["max_unfold"];
            if (fx.contains("grid_stop")) grid.stop = fx["grid_stop"];
        }
        CompPtr p;
        try {
            p = load_program(file.string());
        } catch (const std::exception& e) {
            ProgramCheck bad;
            bad.program = name;
            bad.fault = true;
            bad.notes.push_back(e.what());
            report.programs.push_back(std::move(bad));
            continue;
        }
        ProgramCheck check = check_adequacy(name, p, grid, params);
        if (!fx.is_null()) {
            BigStepOutcome bs = bs_duration(p, params);
            if (fx.contains("taxonomy") && check.taxonomy != fx["taxonomy"])
                report.fixture_failures.push_back(name + ": taxonomy " + check.taxonomy +
                                                  " != " + std::string(fx["taxonomy"]));
            if (fx.contains("duration")) {
                double want = fx["duration"].is_string()
                                  ? std::numeric_limits<double>::infinity()
                                  : double(fx["duration"]);
                if (!durations_close(bs.dur, want, 1e-6))
                    report.fixture_failures.push_back(name + ": duration " +
                                                      format_real(bs.dur) + " != " +
                                                      format_real(want));
            }
            if (fx.contains("value") && bs.converged) {
                if (pretty(bs.value) != std::string(fx["value"]))
                    report.fixture_failures.push_back(name + ": value " + pretty(bs.value) +
                                                      " != " + std::string(fx["value"]));
            }
        }
        report.programs.push_back(std::move(check));
    }

    std::mt19937_64 rng(seed);
    Grid rgrid{0.0, 3.0, 0.5};
    // Generated programs nest loops and sequence divergent trajectories
    // freely; bounded budgets keep the batch fast while every engine still
    // sees identical parameters.
    EvalParams rparams = base_params;
    rparams.max_unfold = std::min(rparams.max_unfold, 64);
    rparams.seq_check_step = std::max(rparams.seq_check_step, 0.05);
    for (int i = 0; i < random_n; ++i) {
        CompPtr p = gen_program(rng);
        ProgramCheck check =
            check_adequacy("random-" + std::to_string(i), p, rgrid, rparams);
        ++report.random_total;
        if (check.inconclusive) ++report.random_exhausted;
        if (!check.ok()) {
            ++report.random_mismatched;
            check.notes.insert(check.notes.begin(), pretty(p));
            report.programs.push_back(std::move(check));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

namespace {

json params_json(const EvalParams& p) {
    return json{{"max_unfold", p.max_unfold},       {"zeno_eps", p.zeno_eps},
                {"zeno_window", p.zeno_window},     {"grid_step", p.grid_step},
                {"boundary_tol", p.boundary_tol},   {"horizon", p.horizon},
                {"seq_check_step", p.seq_check_step}};
}

}  // namespace

std::string report_json(const RunReport& r) {
    json outcome{{"kind", r.outcome_kind}, {"duration", r.duration}};
    if (std::isinf(r.duration)) outcome["duration"] = "inf";
    if (r.value) outcome["value"] = *r.value;
    if (r.taxonomy) outcome["taxonomy"] = *r.taxonomy;
    json j{{"program", r.program},
           {"semantics", r.semantics},
           {"outcome", outcome},
           {"params", params_json(r.params)},
           {"mismatches", r.mismatches}};
    return j.dump(2);
}

std::string conformance_json(const ConformanceReport& r) {
    json progs = json::array();
    for (const auto& c : r.programs) {
        progs.push_back(json{{"program", c.program},
                             {"taxonomy", c.taxonomy},
                             {"ok", c.ok()},
                             {"inconclusive", c.inconclusive},
                             {"duration_agree", c.duration_agree},
                             {"duration_delta", c.duration_delta},
                             {"value_agree", c.value_agree},
                             {"smallstep_agree", c.smallstep_agree},
                             {"evo_points", c.evo_points},
                             {"evo_mismatches", c.evo_mismatches},
                             {"hcc_agree", c.hcc_agree},
                             {"notes", c.notes}});
    }
    json j{{"programs", progs},
           {"random_total", r.random_total},
           {"random_mismatched", r.random_mismatched},
           {"random_exhausted", r.random_exhausted},
           {"fixture_failures", r.fixture_failures},
           {"ok", r.ok()}};
    return j.dump(2);
}

}  // namespace hybcore

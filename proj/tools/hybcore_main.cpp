#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hybcore/denote.hpp"
#include "hybcore/frontend.hpp"
#include "hybcore/harness.hpp"
#include "hybcore/typecheck.hpp"

namespace {

using namespace hybcore;

constexpr int kExitOk = 0;
constexpr int kExitFrontend = 1;
constexpr int kExitFault = 2;
constexpr int kExitMismatch = 3;

struct RunOptions {
    std::string file;
    std::string semantics = "duration";
    std::string grid_spec;
    std::string output;
    bool as_json = false;
    EvalParams params;
};

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
}

int cmd_run(const RunOptions& opt) {
    CompPtr p = load_program(opt.file);
    Ty ty = infer_comp(Context{}, p);

    Grid grid;
    bool have_grid = false;
    if (!opt.grid_spec.empty()) {
        auto g = parse_grid(opt.grid_spec);
        if (!g) {
            std::cerr << "error: bad grid spec '" << opt.grid_spec
                      << "' (expected start:stop:step)\n";
            return kExitFrontend;
        }
        grid = *g;
        have_grid = true;
    }

    RunReport report;
    report.program = opt.file;
    report.semantics = opt.semantics;
    report.params = opt.params;

    if (opt.semantics == "duration" || opt.semantics == "duration-smallstep") {
        BigStepOutcome o = opt.semantics == "duration" ? bs_duration(p, opt.params)
                                                       : ss_run(p, opt.params);
        report.outcome_kind = o.converged ? "Converged" : "Diverged";
        report.duration = o.dur;
        if (o.converged)
            report.value = pretty(o.value);
        else
            report.taxonomy = diverge_kind_str(o.kind);
        write_out(opt.output, (opt.as_json ? report_json(report) : o.str()) + "\n");
        return kExitOk;
    }
    if (opt.semantics == "denot-q") {
        QRes<RtVal> q = denote_q(p, opt.params)({});
        report.outcome_kind = q.is_done() ? "Done" : "Diverge";
        report.duration = q.dur;
        if (q.is_done()) report.value = rt_str(*q.value);
        std::string text = q.is_done()
                               ? "Done(" + format_real(q.dur) + ", " + rt_str(*q.value) + ")"
                               : "Diverge(" + format_real(q.dur) +
                                     (q.exhausted ? ", exhausted)" : ")");
        write_out(opt.output, (opt.as_json ? report_json(report) : text) + "\n");
        return kExitOk;
    }
    if (opt.semantics == "evolution" || opt.semantics == "denot-h") {
        if (!have_grid && opt.semantics == "denot-h") {
            Traj<RtVal> T = denote_h(p, opt.params)({});
            std::string tag = T.tag == TrajTag::cc ? "cc" : (T.tag == TrajTag::cd ? "cd" : "od");
            report.outcome_kind = tag;
            report.duration = T.dur;
            std::string text = tag + ", dur " + format_real(T.dur) +
                               (T.truncated ? " (truncated)" : "");
            write_out(opt.output, (opt.as_json ? report_json(report) : text) + "\n");
            return kExitOk;
        }
        auto rows = sample(p, grid, opt.params, opt.semantics == "evolution");
        write_out(opt.output, rows_to_csv(rows, ty));
        return kExitOk;
    }
    std::cerr << "error: unknown semantics '" << opt.semantics << "'\n";
    return kExitFrontend;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HybCore: a while-language for hybrid computation"};
    app.require_subcommand(1);

    RunOptions opt;
    auto add_param_flags = [&](CLI::App* cmd) {
        cmd->add_option("--max-unfold", opt.params.max_unfold, "loop unfolding budget");
        cmd->add_option("--zeno-eps", opt.params.zeno_eps, "vanishing-increment threshold");
        cmd->add_option("--boundary-tol", opt.params.boundary_tol, "bisection tolerance");
        cmd->add_option("--seq-check-step", opt.params.seq_check_step,
                        "continuum side-condition sampling step");
        cmd->add_option("--grid-step", opt.params.grid_step, "boundary scan step");
    };

    auto* run = app.add_subcommand("run", "evaluate a program under a chosen semantics");
    run->add_option("file", opt.file, "program file (.hc)")->required();
    run->add_option("--semantics", opt.semantics,
                    "duration|duration-smallstep|evolution|denot-q|denot-h");
    run->add_option("--grid", opt.grid_spec, "time grid start:stop:step");
    run->add_option("--output", opt.output, "write output to file");
    run->add_flag("--json", opt.as_json, "emit a JSON report");
    add_param_flags(run);

    std::string check_file;
    auto* check = app.add_subcommand("check", "parse and typecheck only");
    check->add_option("file", check_file, "program file (.hc)")->required();

    std::string classify_file;
    auto* classify_cmd = app.add_subcommand("classify", "taxonomy label of a program");
    classify_cmd->add_option("file", classify_file, "program file (.hc)")->required();
    add_param_flags(classify_cmd);

    std::string conform_dir_path;
    int random_n = 0;
    std::uint64_t seed = 1;
    bool conform_json = false;
    auto* conform = app.add_subcommand("conform", "conformance suite over a program directory");
    conform->add_option("dir", conform_dir_path, "directory of .hc programs")->required();
    conform->add_option("--random", random_n, "additionally check N generated programs");
    conform->add_option("--seed", seed, "generator seed");
    conform->add_flag("--json", conform_json, "emit a JSON report");
    add_param_flags(conform);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opt);
        if (check->parsed()) {
            CompPtr p = load_program(check_file);
            Ty ty = infer_comp(Context{}, p);
            std::cout << "ok: " << ty.str() << "\n";
            return kExitOk;
        }
        if (classify_cmd->parsed()) {
            CompPtr p = load_program(classify_file);
            std::cout << taxonomy_str(classify(p, opt.params)) << "\n";
            return kExitOk;
        }
        if (conform->parsed()) {
            ConformanceReport report =
                conform_dir(conform_dir_path, random_n, seed, opt.params);
            if (conform_json) {
                std::cout << conformance_json(report) << "\n";
            } else {
                for (const auto& c : report.programs) {
                    std::cout << (c.ok() ? "ok   " : "FAIL ") << c.program << " ["
                              << c.taxonomy << "]"
                              << (c.inconclusive ? " (inconclusive)" : "") << "\n";
                    for (const auto& n : c.notes) std::cout << "     " << n << "\n";
                }
                std::cout << "random: " << report.random_total << " checked, "
                          << report.random_mismatched << " mismatched, "
                          << report.random_exhausted << " inconclusive\n";
                for (const auto& f : report.fixture_failures)
                    std::cout << "fixture FAIL: " << f << "\n";
            }
            return report.ok() ? kExitOk : kExitMismatch;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitFrontend;
    } catch (const TypeError& e) {
        std::cerr << "type error: " << e.what() << "\n";
        return kExitFrontend;
    } catch (const RuntimeFault& e) {
        std::cerr << "runtime fault: " << e.what() << "\n";
        return kExitFault;
    }
    return kExitOk;
}

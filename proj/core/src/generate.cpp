#include "hybcore/generate.hpp"

#include <vector>

namespace hybcore {

namespace {

using Rng = std::mt19937_64;

int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

double dyadic(Rng& rng) {
    static const double vals[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    return vals[pick(rng, 8)];
}

double positive_dyadic(Rng& rng) {
    static const double vals[] = {0.25, 0.5, 1.0, 2.0};
    return vals[pick(rng, 4)];
}

struct GenCtx {
    Rng& rng;
    std::vector<std::string> real_vars;
    int counter = 0;
    int loop_depth = 0;  // nested loops multiply unfolding budgets

    std::string fresh() { return "x" + std::to_string(counter++); }
};

ValuePtr gen_real_value(GenCtx& g) {
    bool has_vars = !g.real_vars.empty();
    switch (pick(g.rng, has_vars ? 5 : 2)) {
        case 0:
        case 1: return v_real(dyadic(g.rng));
        case 2: return v_var(g.real_vars[pick(g.rng, static_cast<int>(g.real_vars.size()))]);
        case 3:
            return v_sig("add", v_pair(v_var(g.real_vars[pick(
                                           g.rng, static_cast<int>(g.real_vars.size()))]),
                                       v_real(dyadic(g.rng))));
        default:
            return v_sig("sub", v_pair(v_var(g.real_vars[pick(
                                           g.rng, static_cast<int>(g.real_vars.size()))]),
                                       v_real(dyadic(g.rng))));
    }
}

ValuePtr gen_bool_value(GenCtx& g) {
    if (g.real_vars.empty()) return pick(g.rng, 2) ? v_true() : v_false();
    static const char* cmps[] = {"lt", "leq", "gt", "geq"};
    return v_sig(cmps[pick(g.rng, 4)],
                 v_pair(v_var(g.real_vars[pick(g.rng, static_cast<int>(g.real_vars.size()))]),
                        v_real(dyadic(g.rng))));
}

CompPtr gen_wait(double d) {
    return c_traj("t", v_var("t"), "w", v_sig("leq", v_pair(v_var("w"), v_real(d))));
}

CompPtr gen_comp(GenCtx& g, int depth);

CompPtr gen_loop(GenCtx& g, int depth) {
    ++g.loop_depth;
    std::string x = g.fresh();
    int shape = pick(g.rng, 10);
    double k = 1.0 + pick(g.rng, 4);
    double dec = positive_dyadic(g.rng);
    ValuePtr guard = v_sig("gt", v_pair(v_var(x), v_real(0.0)));
    g.real_vars.push_back(x);
    CompPtr step_down = c_now(v_sig("sub", v_pair(v_var(x), v_real(dec))));
    CompPtr body;
    switch (shape) {
        case 0:  // divergent non-progressive
            guard = v_true();
            body = c_now(v_sig("add", v_pair(v_var(x), v_real(1.0))));
            break;
        case 1:  // divergent progressive
            guard = v_true();
            body = c_seq("_", gen_wait(1.0), c_now(v_sig("add", v_pair(v_var(x), v_real(1.0)))));
            break;
        case 2:  // Zeno
            guard = v_true();
            body = c_seq("_",
                         c_traj("t", v_var("t"), "w", v_sig("leq", v_pair(v_var("w"), v_var(x)))),
                         c_now(v_sig("div", v_pair(v_var(x), v_real(2.0)))));
            break;
        case 3:
        case 4:  // convergent with waits
            body = c_seq("_", gen_wait(dec), step_down);
            break;
        case 5: {  // nested computation body
            CompPtr inner = gen_comp(g, depth - 1);
            body = c_seq("_", inner, step_down);
            break;
        }
        default:  // instantaneous countdown
            body = step_down;
            break;
    }
    g.real_vars.pop_back();
    --g.loop_depth;
    return c_while(x, c_now(v_real(k)), guard, body);
}

CompPtr gen_comp(GenCtx& g, int depth) {
    if (depth <= 0) return c_now(gen_real_value(g));
    switch (pick(g.rng, 8)) {
        case 0:
            return c_now(gen_real_value(g));
        case 1: {
            std::string x = g.fresh();
            CompPtr p = gen_comp(g, depth - 1);
            g.real_vars.push_back(x);
            CompPtr q = gen_comp(g, depth - 1);
            g.real_vars.pop_back();
            return c_seq(x, p, q);
        }
        case 2:
            return c_if(gen_bool_value(g), gen_comp(g, depth - 1), gen_comp(g, depth - 1));
        case 3:
            if (g.loop_depth < 2) return gen_loop(g, depth);
            return c_now(gen_real_value(g));
        case 4: {  // monotone threshold trajectory
            double c0 = dyadic(g.rng);
            double c1 = dyadic(g.rng);
            std::string y = g.fresh();
            bool strict = pick(g.rng, 4) == 0;
            return c_traj("t", v_sig("line", v_pair(v_real(c0), v_var("t"))), y,
                          v_sig(strict ? "lt" : "leq", v_pair(v_var(y), v_real(c1))));
        }
        case 5:
            return gen_wait(positive_dyadic(g.rng));
        case 6: {  // pair introduction and elimination
            std::string z = g.fresh(), a = g.fresh(), b = g.fresh();
            ValuePtr e1 = gen_real_value(g), e2 = gen_real_value(g);
            g.real_vars.push_back(a);
            g.real_vars.push_back(b);
            CompPtr body = gen_comp(g, depth - 1);
            g.real_vars.pop_back();
            g.real_vars.pop_back();
            return c_seq(z, c_now(v_pair(e1, e2)), c_pairmatch(a, b, v_var(z), body));
        }
        default: {
            std::string x = g.fresh();
            CompPtr p = gen_comp(g, depth - 1);
            g.real_vars.push_back(x);
            CompPtr q = gen_comp(g, depth - 1);
            g.real_vars.pop_back();
            return c_seq(x, p, q);
        }
    }
}

}  // namespace

CompPtr gen_program(std::mt19937_64& rng, int max_depth) {
    GenCtx g{rng, {}, 0, 0};
    return gen_comp(g, max_depth);
}

}  // namespace hybcore

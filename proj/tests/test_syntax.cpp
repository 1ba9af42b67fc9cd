#include <doctest.h>

#include <random>

#include "hybcore/frontend.hpp"
#include "hybcore/syntax.hpp"

using namespace hybcore;

namespace {

ValuePtr sub_expr(ValuePtr a, ValuePtr b) { return v_sig("sub", v_pair(a, b)); }

// Small random open value/computation terms over the variables a, b, c.
ValuePtr rand_value(std::mt19937_64& rng, int depth) {
    if (depth == 0) {
        switch (rng() % 4) {
            case 0: return v_var("a");
            case 1: return v_var("b");
            case 2: return v_var("c");
            default: return v_real(1.0 + double(rng() % 3));
        }
    }
    switch (rng() % 3) {
        case 0: return v_pair(rand_value(rng, depth - 1), rand_value(rng, depth - 1));
        case 1: return v_sig("add", v_pair(rand_value(rng, depth - 1), rand_value(rng, depth - 1)));
        default: return rand_value(rng, 0);
    }
}

CompPtr rand_comp(std::mt19937_64& rng, int depth) {
    if (depth == 0) return c_now(rand_value(rng, 1));
    switch (rng() % 5) {
        case 0: return c_seq("a", rand_comp(rng, depth - 1), rand_comp(rng, depth - 1));
        case 1: return c_seq("z", rand_comp(rng, depth - 1), rand_comp(rng, depth - 1));
        case 2:
            return c_if(v_sig("lt", v_pair(rand_value(rng, 0), v_real(1))),
                        rand_comp(rng, depth - 1), rand_comp(rng, depth - 1));
        case 3:
            return c_while("b", rand_comp(rng, depth - 1),
                           v_sig("gt", v_pair(v_var("b"), v_real(0))),
                           rand_comp(rng, depth - 1));
        default:
            return c_traj("t", rand_value(rng, 1), "s",
                          v_sig("leq", v_pair(v_var("s"), rand_value(rng, 0))));
    }
}

}  // namespace

TEST_CASE("substitute replaces free occurrences") {
    // substitute(x - 1, {x -> 5}) = 5 - 1
    ValuePtr t = sub_expr(v_var("x"), v_real(1));
    ValuePtr r = substitute(t, Subst{{"x", v_real(5)}});
    CHECK(term_eq(r, sub_expr(v_real(5), v_real(1))));

    // identity case
    CompPtr p = c_now(v_var("x"));
    CHECK(term_eq(substitute(p, Subst{}), p));
}

TEST_CASE("substitute respects binders") {
    // while x := now x & x > 0 { now (x - 1) } with {x -> 5}: only the
    // unbound occurrence in the init is replaced.
    CompPtr loop = c_while("x", c_now(v_var("x")), v_sig("gt", v_pair(v_var("x"), v_real(0))),
                           c_now(sub_expr(v_var("x"), v_real(1))));
    CompPtr r = substitute(loop, Subst{{"x", v_real(5)}});
    CompPtr expect =
        c_while("x", c_now(v_real(5)), v_sig("gt", v_pair(v_var("x"), v_real(0))),
                c_now(sub_expr(v_var("x"), v_real(1))));
    CHECK(term_eq(r, expect));
}

TEST_CASE("free_vars") {
    CHECK(free_vars(c_now(v_star())).empty());

    // x := p; q where q mentions only x: free vars are those of p
    CompPtr p = c_now(v_var("y"));
    CompPtr seq = c_seq("x", p, c_now(v_var("x")));
    CHECK(free_vars(seq) == std::set<std::string>{"y"});

    // evolve x = t. line(a, t) & x <= b: free vars {a, b}
    CompPtr tr = c_traj("t", v_sig("line", v_pair(v_var("a"), v_var("t"))), "x",
                        v_sig("leq", v_pair(v_var("x"), v_var("b"))));
    CHECK(free_vars(tr) == std::set<std::string>{"a", "b"});
}

TEST_CASE("substitution composition and free-vars laws") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        CompPtr p = rand_comp(rng, 3);
        Subst s1{{"a", v_real(7)}};
        Subst s2{{"b", v_pair(v_real(1), v_real(2))}, {"c", v_real(3)}};

        // Disjoint domains, closed values: sequential application equals
        // application of the union.
        Subst both = s1;
        both.insert(s2.begin(), s2.end());
        CHECK(term_eq(substitute(substitute(p, s1), s2), substitute(p, both)));

        // free_vars(p[s]) = free_vars(p) \ dom(s)
        auto fv = free_vars(p);
        for (const auto& [n, _] : both) fv.erase(n);
        CHECK(free_vars(substitute(p, both)) == fv);
    }
}

TEST_CASE("context lookup and non-repetition") {
    Context ctx;
    ctx.push("x", Ty::real());
    ctx.push("y", Ty::boolean());
    CHECK(ctx.is_nonrepetitive());
    CHECK(*ctx.lookup("x") == Ty::real());
    CHECK(ctx.lookup("z") == nullptr);
    ctx.push("x", Ty::nat());
    CHECK_FALSE(ctx.is_nonrepetitive());
    CHECK(*ctx.lookup("x") == Ty::nat());  // innermost wins
}

TEST_CASE("type equality is structural") {
    Ty a = Ty::prod(Ty::real(), Ty::prod(Ty::nat(), Ty::boolean()));
    Ty b = Ty::prod(Ty::real(), Ty::prod(Ty::nat(), Ty::boolean()));
    CHECK(a == b);
    CHECK(a != Ty::prod(Ty::real(), Ty::nat()));
    CHECK(Ty::unit() == Ty::unit());
}

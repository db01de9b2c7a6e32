#include <gtest/gtest.h>

#include "mises/eval.hpp"
#include "mises/parser.hpp"
#include "mises/prob_equal.hpp"
#include "test_support.hpp"

using namespace mises;

namespace {

Context basic_context() {
    Context ctx;
    ctx.symbols({"x", "y", "a", "x0", "u0", "t0"})
        .function("f", 1)
        .function("g", 2)
        .dependent("u", {"t", "x"})
        .dependent("eta", {"t", "u"})
        .dependent("theta", {"t", "u"});
    return ctx;
}

TEST(Parse, EquationTerms) {
    Context ctx = basic_context();
    ctx.symbol("nu");
    Expr e = parse("u_t + f(u)*u_x - a*u_xx", ctx);
    ASSERT_EQ(e.kind(), Kind::Sum);
    EXPECT_EQ(e.kids().size(), 3u);
}

TEST(Parse, PowerOfSumStaysStructural) {
    Context ctx = basic_context();
    Expr e = parse("(x+1)^2", ctx);
    ASSERT_EQ(e.kind(), Kind::Power);
    EXPECT_EQ(e.base().kind(), Kind::Sum);
    EXPECT_TRUE(e.exponent() == rational(2));
}

TEST(Parse, IntegralNode) {
    Context ctx = basic_context();
    ctx.dependent("w", {"t", "z"});
    Expr e = parse("int(u, z, x0, x)", ctx);
    ASSERT_EQ(e.kind(), Kind::Integral);
    EXPECT_EQ(e.name(), "z");
    EXPECT_TRUE(e.integrand().is_symbol("u"));
    EXPECT_TRUE(e.lower().is_symbol("x0"));
    EXPECT_TRUE(e.upper().is_symbol("x"));
}

TEST(Parse, JetSuffixForms) {
    Context ctx = basic_context();
    EXPECT_TRUE(parse("u_tx", ctx).is_symbol("u_tx"));
    EXPECT_TRUE(parse("u_xt", ctx).is_symbol("u_tx")); // normalized order
    EXPECT_TRUE(parse("u_x^(3)", ctx).is_symbol("u_xxx"));
    Expr p = parse("u_x^3", ctx);
    ASSERT_EQ(p.kind(), Kind::Power);
    EXPECT_TRUE(p.base().is_symbol("u_x"));
    Expr q = parse("u_x^(3/2)", ctx); // parenthesized fraction is a power, not a jet
    ASSERT_EQ(q.kind(), Kind::Power);
}

TEST(Parse, SymbolicExponent) {
    Context ctx = basic_context();
    ctx.symbol("n");
    Expr e = parse("u_x^n", ctx);
    ASSERT_EQ(e.kind(), Kind::Power);
    EXPECT_TRUE(e.exponent().is_symbol("n"));
}

TEST(Parse, Errors) {
    Context ctx = basic_context();
    EXPECT_THROW(parse("x + ", ctx), ParseError);
    EXPECT_THROW(parse("x + qq", ctx), ParseError);
    EXPECT_THROW(parse("f(x, y)", ctx), ParseError); // f is unary
    EXPECT_THROW(parse("y_x", ctx), ParseError);     // y is not a jet variable
    EXPECT_THROW(parse("u_q", ctx), ParseError);     // q is not a direction
    try {
        parse("x + (y", ctx);
        FAIL() << "expected ParseError";
    } catch (const ParseError& ex) {
        EXPECT_GT(ex.pos, 0u);
    }
}

TEST(Print, RoundTripIsIdentity) {
    Context ctx = basic_context();
    for (const char* text :
         {"x + y", "2*x - 3*y", "x^(-1)", "f(x)*f'(x)", "g(x, y)", "g[1,1](x, y)",
          "(x + 1)^2*y", "int(1/(2*t0*w + 1), w, u0, x)", "eta_uu*eta^2", "3/2*x",
          "x^(1/2) + u_xx", "u_x^2 - u_tx"}) {
        Expr e = parse(text, ctx);
        Expr again = parse(to_string(e), ctx);
        EXPECT_TRUE(e == again) << text << " printed as " << to_string(e);
    }
}

TEST(Print, RoundTripRandom) {
    std::mt19937_64 rng(kDefaultSeed);
    test::GenOptions opts;
    Context ctx = basic_context();
    for (int i = 0; i < 300; ++i) {
        Expr e = test::random_expr(rng, opts);
        Expr again = parse(to_string(e), ctx);
        EXPECT_TRUE(e == again) << to_string(e);
    }
}

TEST(Simplify, CollectsTerms) {
    Context ctx = basic_context();
    EXPECT_TRUE(parse("x + x", ctx) == parse("2*x", ctx));
    EXPECT_TRUE(parse("eta*(1/eta)", ctx) == rational(1));
    EXPECT_TRUE(parse("x - x", ctx).is_zero());
    EXPECT_TRUE(parse("x*x*x", ctx) == parse("x^3", ctx));
    EXPECT_TRUE(parse("(x^2)^(1/2)", ctx).is_symbol("x"));
}

TEST(Simplify, ChainRuleExpansionExample) {
    // eta^2 * d/du(F/eta) with F = a eta eta_u collapses to a eta^2 eta_uu
    Context ctx = basic_context();
    JetContext ec{{"t", "u"}, "eta", 10, ""};
    Expr f = parse("a*eta*eta_u", ctx);
    Expr inner = simplify(f / symbol("eta"));
    Expr d = total_derivative(inner, "u", ec);
    Expr full = simplify(parse("eta^2", ctx) * d);
    EXPECT_TRUE(full == parse("a*eta^2*eta_uu", ctx));
}

TEST(Simplify, IdempotentOnRawCorpus) {
    std::mt19937_64 rng(kDefaultSeed);
    test::GenOptions opts;
    for (int i = 0; i < 1000; ++i) {
        Expr raw = test::random_raw_expr(rng, opts);
        Expr s1 = simplify(raw);
        Expr s2 = simplify(s1);
        ASSERT_EQ(compare(s1, s2), 0) << to_string(raw);
    }
}

TEST(Simplify, PreservesValueOnRawCorpus) {
    std::mt19937_64 rng(kDefaultSeed + 1);
    test::GenOptions opts;
    opts.allow_fractional_powers = false; // raw trees may evaluate negative bases
    ProbEqualOptions popts;
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        Expr raw = test::random_raw_expr(rng, opts);
        Expr s = simplify(raw);
        EvalEnv env = random_env({raw, s}, rng, popts);
        try {
            double a = eval_numeric(raw, env);
            double b = eval_numeric(s, env);
            ASSERT_LE(std::abs(a - b), 1e-12 * (1 + std::abs(a) + std::abs(b))) << to_string(raw);
            ++checked;
        } catch (const EvalError&) {
            continue; // singular draw
        }
    }
    EXPECT_GT(checked, 200);
}

TEST(Differentiate, BasicRules) {
    Context ctx = basic_context();
    EXPECT_TRUE(differentiate(parse("u0^3 + 2*u0", ctx), "u0") ==
                parse("3*u0^2 + 2", ctx));
    // eta is opaque at this level: d/du0 (f(u0) eta) = f'(u0) eta
    Expr e = parse("f(u0)*eta", ctx);
    EXPECT_TRUE(differentiate(e, "u0") == parse("f'(u0)*eta", ctx));
}

TEST(Differentiate, FundamentalTheorem) {
    Context ctx = basic_context();
    ctx.dependent("w", {"t", "z"});
    Expr e = parse("int(g(t0, z), z, x0, x)", ctx);
    EXPECT_TRUE(differentiate(e, "x") == parse("g(t0, x)", ctx));
    // lower bound dependence is rejected
    Expr bad = parse("int(g(t0, z), z, x, x0)", ctx);
    EXPECT_THROW(differentiate(bad, "x"), std::domain_error);
}

TEST(Differentiate, ProductRuleProperty) {
    std::mt19937_64 rng(kDefaultSeed + 2);
    test::GenOptions opts;
    int checked = 0;
    for (int i = 0; i < 80 && checked < 50; ++i) {
        Expr a = test::random_expr(rng, opts);
        Expr b = test::random_expr(rng, opts);
        Expr lhs = differentiate(simplify(a * b), "x");
        Expr rhs = simplify(a * differentiate(b, "x") + b * differentiate(a, "x"));
        try {
            EXPECT_TRUE(equal_probabilistic(lhs, rhs, {.seed = kDefaultSeed + i})) << to_string(a);
            ++checked;
        } catch (const EvalError&) {
            continue; // expression singular almost everywhere on the sampling window
        }
    }
    EXPECT_GE(checked, 50);
}

TEST(Differentiate, AgreesWithFiniteDifferences) {
    std::mt19937_64 rng(kDefaultSeed + 3);
    test::GenOptions opts;
    opts.plain_function_args = true; // nested opaque functions overwhelm the FD step
    ProbEqualOptions popts;
    const double h = 1e-5;
    int checked = 0;
    for (int i = 0; i < 300 && checked < 80; ++i) {
        Expr e = test::random_expr(rng, opts);
        Expr d = differentiate(e, "x");
        EvalEnv env = random_env({e, d}, rng, popts);
        try {
            double exact = eval_numeric(d, env);
            EvalEnv lo = env, hi = env;
            lo.vars["x"] -= h;
            hi.vars["x"] += h;
            double fd = (eval_numeric(e, hi) - eval_numeric(e, lo)) / (2 * h);
            if (std::abs(exact) < 1e-3 || std::abs(exact) > 1e4) continue; // degenerate point
            ASSERT_LE(std::abs(fd - exact) / std::abs(exact), 1e-6) << to_string(e);
            ++checked;
        } catch (const EvalError&) {
            continue;
        }
    }
    EXPECT_GE(checked, 80);
}

TEST(Substitute, Basics) {
    Context ctx = basic_context();
    EXPECT_TRUE(substitute(parse("eta^2", ctx), {{"eta", parse("1/x", ctx)}}) ==
                parse("x^(-2)", ctx));
    EXPECT_TRUE(substitute(parse("eta", ctx), {{"eta", parse("theta^(1/2)", ctx)}}) ==
                parse("theta^(1/2)", ctx));
    Expr e = parse("x + y", ctx);
    EXPECT_TRUE(substitute(e, {}) == e);
}

TEST(SubstituteFuncapp, DerivativesOfBoundFunction) {
    Context ctx = basic_context();
    ctx.symbol("b").symbol("w");
    Expr e = parse("f'(x) + f(x)", ctx);
    Expr out = substitute_funcapp(e, "f", {"w"}, parse("b*w^2", ctx));
    EXPECT_TRUE(out == parse("2*b*x + b*x^2", ctx));
}

TEST(Eval, Basics) {
    Context ctx = basic_context();
    EvalEnv env;
    env.vars["x"] = 3.0;
    EXPECT_DOUBLE_EQ(eval_numeric(parse("2*x", ctx), env), 6.0);
    env.vars["theta"] = 4.0;
    EXPECT_DOUBLE_EQ(eval_numeric(parse("theta^(3/2)", ctx), env), 8.0);
    env.vars["u0"] = 2.0;
    env.funcs["f"] = Polynomial{1, {{1.0, {3}}}}; // f(w) = w^3
    EXPECT_DOUBLE_EQ(eval_numeric(parse("f'(u0)", ctx), env), 12.0);
}

TEST(Eval, Errors) {
    Context ctx = basic_context();
    EvalEnv env;
    env.vars["x"] = 0.0;
    EXPECT_THROW(eval_numeric(parse("1/x", ctx), env), EvalError);
    env.vars["x"] = -2.0;
    EXPECT_THROW(eval_numeric(parse("x^(1/2)", ctx), env), EvalError);
    EXPECT_THROW(eval_numeric(parse("y", ctx), env), EvalError);
}

TEST(Eval, IntegralQuadrature) {
    Context ctx = basic_context();
    EvalEnv env;
    env.vars["x"] = 2.0;
    env.vars["x0"] = 1.0;
    // int_1^2 w^2 dw = 7/3
    double v = eval_numeric(parse("int(w^2, w, x0, x)", ctx), env);
    EXPECT_NEAR(v, 7.0 / 3.0, 1e-12);
}

TEST(EqualProbabilistic, Examples) {
    Context ctx = basic_context();
    EXPECT_TRUE(equal_probabilistic(parse("(x+1)^2", ctx), parse("x^2 + 2*x + 1", ctx)));
    ctx.symbol("nu");
    Expr lhs = parse("eta_t - a*eta^2*eta_uu + f'(u0)*eta^2", ctx);
    Expr rhs = parse("eta_t - a*eta^2*eta_uu", ctx);
    EXPECT_FALSE(equal_probabilistic(lhs, rhs));
}

TEST(EqualProbabilistic, RetriesPastSingularPoints) {
    Context ctx = basic_context();
    // (x - y)^(-1) is singular on a measure-zero set only; draws succeed
    Expr a = parse("(x - y)^(-1)*(x - y)", ctx);
    EXPECT_TRUE(equal_probabilistic(a, rational(1)));
}

} // namespace

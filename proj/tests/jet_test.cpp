#include <gtest/gtest.h>

#include "mises/eval.hpp"
#include "mises/jet.hpp"
#include "mises/parser.hpp"
#include "mises/prob_equal.hpp"
#include "test_support.hpp"

using namespace mises;

namespace {

Context jet_ctx() {
    Context ctx;
    ctx.function("f", 1).dependent("u", {"t", "x"}).dependent("eta", {"t", "u"});
    return ctx;
}

JetContext u_ctx() { return JetContext{{"t", "x"}, "u", 8, "x"}; }
JetContext eta_ctx() { return JetContext{{"t", "u"}, "eta", 8, ""}; }

TEST(JetNames, CanonicalOrdering) {
    EXPECT_EQ(jet_name("u", {"t", "x"}, {1, 1}), "u_tx");
    EXPECT_EQ(jet_name("u", {"t", "x"}, {0, 0}), "u");
    EXPECT_EQ(jet_name("Z", {"xi", "tau"}, {2, 0}), "Z_xixi");
    auto c = match_jet("u_txx", "u", {"t", "x"});
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ((*c)[0], 1);
    EXPECT_EQ((*c)[1], 2);
    EXPECT_FALSE(match_jet("u_xt", "u", {"t", "x"}).has_value()); // non-canonical
    EXPECT_FALSE(match_jet("v_x", "u", {"t", "x"}).has_value());
    auto z = match_jet("Z_xitau", "Z", {"xi", "tau"});
    ASSERT_TRUE(z.has_value());
    EXPECT_EQ((*z)[0], 1);
    EXPECT_EQ((*z)[1], 1);
}

TEST(TotalDerivative, Examples) {
    Context ctx = jet_ctx();
    // D_x(u u_x) = u_x^2 + u u_xx
    EXPECT_TRUE(total_derivative(parse("u*u_x", ctx), "x", u_ctx()) ==
                parse("u_x^2 + u*u_xx", ctx));
    // D_x(u_t / u_x) = (u_x u_tx - u_t u_xx) / u_x^2
    Expr d = total_derivative(parse("u_t/u_x", ctx), "x", u_ctx());
    EXPECT_TRUE(equal_probabilistic(d, parse("(u_x*u_tx - u_t*u_xx)/u_x^2", ctx)));
    // explicit occurrences of the variable are differentiated too
    EXPECT_TRUE(total_derivative(parse("x*u", ctx), "x", u_ctx()) == parse("u + x*u_x", ctx));
}

TEST(TotalDerivative, OrderOverflowWarns) {
    Context ctx = jet_ctx();
    JetContext jc{{"t", "x"}, "u", 1, "x"};
    std::vector<std::string> warnings;
    total_derivative(parse("u_x", ctx), "x", jc, &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("exceeds"), std::string::npos);
}

TEST(TotalDerivative, Commutation) {
    std::mt19937_64 rng(kDefaultSeed + 11);
    JetContext jc{{"t", "x"}, "u", 10, "x"};
    for (int i = 0; i < 40; ++i) {
        Expr e = test::random_jet_expr(rng);
        Expr dtx = total_derivative(total_derivative(e, "t", jc), "x", jc);
        Expr dxt = total_derivative(total_derivative(e, "x", jc), "t", jc);
        EXPECT_TRUE(equal_probabilistic(dtx, dxt, {.seed = kDefaultSeed + i})) << to_string(e);
    }
}

TEST(MisesProlong, FirstOrders) {
    Context ctx = jet_ctx();
    EXPECT_TRUE(mises_prolong(1, eta_ctx(), "u") == parse("eta", ctx));
    EXPECT_TRUE(mises_prolong(2, eta_ctx(), "u") == parse("eta*eta_u", ctx));
    EXPECT_TRUE(mises_prolong(3, eta_ctx(), "u") == parse("eta*eta_u^2 + eta^2*eta_uu", ctx));
}

TEST(MisesProlong, DegreeBookkeeping) {
    // order at most k-1 in eta-jets, total degree exactly k
    for (int k = 1; k <= 5; ++k) {
        Expr p = mises_prolong(k, eta_ctx(), "u");
        std::set<std::string> jets;
        int max_order = 0;
        for (const auto& name : free_symbols(p)) {
            auto c = match_jet(name, "eta", {"t", "u"});
            ASSERT_TRUE(c.has_value()) << name;
            jets.insert(name);
            max_order = std::max(max_order, (*c)[0] + (*c)[1]);
        }
        EXPECT_EQ(max_order, k - 1);
        EXPECT_EQ(polynomial_degree(p, jets), k);
    }
}

TEST(ToMises, Examples) {
    Context ctx = jet_ctx();
    EXPECT_TRUE(equal_probabilistic(to_mises(parse("u_xx/u_x^2", ctx), u_ctx(), eta_ctx()),
                                    parse("eta_u/eta", ctx)));
    ctx.symbol("n");
    EXPECT_TRUE(to_mises(parse("u_x^n", ctx), u_ctx(), eta_ctx()) == parse("eta^n", ctx));
    EXPECT_TRUE(to_mises(parse("u_xxx", ctx), u_ctx(), eta_ctx()) ==
                parse("eta*eta_u^2 + eta^2*eta_uu", ctx));
}

TEST(ToMises, RejectsTimeJetsByName) {
    Context ctx = jet_ctx();
    try {
        to_mises(parse("u_t + u_xx", ctx), u_ctx(), eta_ctx());
        FAIL() << "expected MisesError";
    } catch (const MisesError& ex) {
        EXPECT_NE(std::string(ex.what()).find("u_t"), std::string::npos);
    }
    EXPECT_THROW(to_mises(parse("u_tx", ctx), u_ctx(), eta_ctx()), MisesError);
}

// Numeric soundness: substituting u = g(x) and the matching eta-jet values
// into e and to_mises(e) gives equal numbers for monotone test profiles.
TEST(ToMises, NumericSoundness) {
    std::mt19937_64 rng(kDefaultSeed + 17);
    Context ctx = jet_ctx();
    std::uniform_int_distribution<int> coeff(1, 3);
    std::uniform_real_distribution<double> point(0.4, 1.6);

    int done = 0;
    for (int trial = 0; trial < 60 && done < 25; ++trial) {
        // monotone quartic: g' = c1 + c2 x^2 + c3 x^3 > 0 on [0.3, 1.7]
        Expr x = symbol("x");
        Expr gp = simplify(rational(coeff(rng)) + rational(coeff(rng)) * power(x, rational(2)) +
                           rational(coeff(rng)) * power(x, rational(3)));
        // g = int g' dx (monomial integration)
        Expr g = rational(0);
        for (const auto& term : sum_terms(gp)) {
            Expr k = simplify(term * x);
            auto fe = factor_exponent(k, "x");
            g = simplify(g + k / rational(fe));
        }

        Expr e = test::random_jet_expr(rng);
        if (contains_symbol(e, "u_t") || contains_symbol(e, "u_tx")) {
            std::map<std::string, Expr> kill{{"u_t", rational(1)}, {"u_tx", rational(1)}};
            e = substitute(e, kill); // keep only x-direction jets
        }

        Expr mis;
        try {
            mis = to_mises(e, u_ctx(), eta_ctx());
        } catch (const MisesError&) {
            continue;
        }

        double x0 = point(rng);
        EvalEnv env;
        env.vars["t"] = point(rng);
        env.vars["x"] = x0;
        env.funcs["f"] = Polynomial{1, {{1.0, {2}}, {2.0, {0}}}};

        // exact jet values from g
        EvalEnv gx;
        gx.vars["x"] = x0;
        Expr d1 = differentiate(g, "x");
        Expr d2 = differentiate(d1, "x");
        Expr d3 = differentiate(d2, "x");
        env.vars["u"] = eval_numeric(g, gx);
        env.vars["u_x"] = eval_numeric(d1, gx);
        env.vars["u_xx"] = eval_numeric(d2, gx);
        env.vars["u_xxx"] = eval_numeric(d3, gx);

        // eta-jets via eta_{j+1} = D_x(eta_j) / g'
        Expr eta0 = d1;
        Expr eta1 = simplify(differentiate(eta0, "x") / d1);
        Expr eta2 = simplify(differentiate(eta1, "x") / d1);
        env.vars["eta"] = eval_numeric(eta0, gx);
        env.vars["eta_u"] = eval_numeric(eta1, gx);
        env.vars["eta_uu"] = eval_numeric(eta2, gx);

        try {
            double lhs = eval_numeric(e, env);
            double rhs = eval_numeric(mis, env);
            ASSERT_LE(std::abs(lhs - rhs), 1e-8 * (1 + std::abs(lhs) + std::abs(rhs)))
                << to_string(e) << "  ->  " << to_string(mis);
            ++done;
        } catch (const EvalError&) {
            continue;
        }
    }
    EXPECT_GE(done, 25);
}

} // namespace

#include <gtest/gtest.h>

#include <cmath>

#include "mises/numeric.hpp"
#include "mises/parser.hpp"

using namespace mises;

namespace {

TEST(SolveMol, HeatEquationAgainstClosedForm) {
    auto exact = [](double t, double x) { return std::exp(t - x); };
    Grid grid{0.0, 1.0, 200, 0.1, 21, Grid::Bc::DirichletExact};
    MolOptions opts;
    opts.dt_max = 0.4 * grid.dx() * grid.dx();
    NumericSolution sol = solve_mol(symbol("u_xx"), {}, exact, grid, exact, opts);
    EXPECT_LE(mol_max_error(sol, exact), 1e-5);
    EXPECT_TRUE(sol.monotone);
}

TEST(SolveMol, BurgersTravellingFront) {
    auto exact = [](double t, double x) { return 1.0 - std::tanh((x - t) / 2); };
    Grid grid{-4.0, 4.0, 200, 0.5, 26, Grid::Bc::DirichletExact};
    Expr rhs = symbol("u_xx") - symbol("u") * symbol("u_x");
    MolOptions opts;
    opts.dt_max = 0.4 * grid.dx() * grid.dx();
    NumericSolution sol = solve_mol(rhs, {}, exact, grid, exact, opts);
    EXPECT_LE(mol_max_error(sol, exact), 1e-4);
}

TEST(SolveMol, ZeroInitialConditionStaysZero) {
    auto zero = [](double, double) { return 0.0; };
    Grid grid{0.0, 1.0, 64, 0.1, 11, Grid::Bc::DirichletExact};
    NumericSolution sol = solve_mol(symbol("u_xx"), {}, zero, grid, zero);
    for (const auto& row : sol.u)
        for (double v : row) EXPECT_EQ(v, 0.0);
    EXPECT_FALSE(sol.monotone); // constant rows violate the monotonicity floor
}

TEST(SolveMol, Validation) {
    auto zero = [](double, double) { return 0.0; };
    Grid tiny{0.0, 1.0, 8, 0.1, 11, Grid::Bc::DirichletExact};
    EXPECT_THROW(solve_mol(symbol("u_xx"), {}, zero, tiny, zero), NumericError);

    // u_t = u^2 with constant data blows up at t = 1/u0
    auto five = [](double, double) { return 5.0; };
    Grid grid{0.0, 1.0, 32, 0.5, 11, Grid::Bc::Periodic};
    Expr rhs = power(symbol("u"), rational(2));
    EXPECT_THROW(solve_mol(rhs, {}, five, grid, nullptr), NumericError);
}

NumericSolution sampled_solution(const std::function<double(double, double)>& field, double x_lo,
                                 double x_hi, int nx, double t_end, int nt) {
    Grid grid{x_lo, x_hi, nx, t_end, nt, Grid::Bc::DirichletExact};
    NumericSolution sol;
    sol.grid = grid;
    sol.monotone = true;
    sol.min_abs_ux = 1.0;
    for (int k = 0; k < nt; ++k) {
        double t = t_end * k / (nt - 1);
        std::vector<double> row(nx);
        for (int i = 0; i < nx; ++i) row[i] = field(t, grid.x(i));
        sol.times.push_back(t);
        sol.u.push_back(std::move(row));
    }
    return sol;
}

TEST(BuildEta, LinearProfileGivesUnitField) {
    auto field = [](double, double x) { return x; };
    NumericSolution sol = sampled_solution(field, 0.0, 1.0, 101, 0.1, 5);
    EtaField eta = build_eta(sol, 64);
    for (const auto& row : eta.eta)
        for (double v : row) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(BuildEta, ExponentialProfileMatchesAnalytic) {
    // u = e^(t-x) has u_x = -u, so eta(t, u) = -u
    auto field = [](double t, double x) { return std::exp(t - x); };
    NumericSolution sol = sampled_solution(field, 0.0, 1.0, 401, 0.1, 9);
    EtaField eta = build_eta(sol, 128);
    double worst = 0.0;
    for (size_t k = 0; k < eta.times.size(); ++k)
        for (size_t j = 0; j < eta.ugrid.size(); ++j)
            worst = std::max(worst, std::abs(eta.eta[k][j] + eta.ugrid[j]));
    EXPECT_LE(worst, 1e-8);
}

TEST(BuildEta, CubicSpotCheck) {
    // u = x^3 + x is monotone; at u = 2 the preimage is x = 1 and eta = 4
    auto field = [](double, double x) { return x * x * x + x; };
    NumericSolution sol = sampled_solution(field, 0.5, 1.5, 401, 0.1, 5);
    EtaField eta = build_eta(sol, 201);
    auto eta_analytic = [](double u) {
        double x = 1.0; // Newton inversion of u = x^3 + x
        for (int it = 0; it < 50; ++it) x -= (x * x * x + x - u) / (3 * x * x + 1);
        return 3 * x * x + 1;
    };
    double worst = 0.0;
    size_t nearest = 0;
    for (size_t j = 0; j < eta.ugrid.size(); ++j) {
        worst = std::max(worst, std::abs(eta.eta[0][j] - eta_analytic(eta.ugrid[j])));
        if (std::abs(eta.ugrid[j] - 2.0) < std::abs(eta.ugrid[nearest] - 2.0)) nearest = j;
    }
    EXPECT_LE(worst, 1e-6);
    EXPECT_NEAR(eta.eta[0][nearest], eta_analytic(eta.ugrid[nearest]), 1e-8);
    EXPECT_NEAR(eta_analytic(2.0), 4.0, 1e-12);
}

TEST(BuildEta, RejectsNonMonotoneSolutions) {
    auto field = [](double, double x) { return std::sin(3 * x); };
    NumericSolution sol = sampled_solution(field, 0.0, 3.0, 101, 0.1, 5);
    sol.monotone = false;
    EXPECT_THROW(build_eta(sol, 64), NumericError);
}

TEST(ResidualOnField, ConstantFieldSolvesSteadyEquation) {
    EtaField field = sample_eta([](double, double) { return 0.7; }, 0.0, 1.0, 32, 0.3, 1.3, 32);
    MisesEquation eq;
    eq.lhs = symbol("eta_t");
    eq.rhs = rational(0);
    VerificationReport rep = residual_on_field(eq, field, {}, 1e-14);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.max_residual, 0.0);
}

TEST(ResidualOnField, Example3SampledField) {
    // eta = sqrt(2tu + 1) against (eta eta_u)_t = 1, finite differences only
    EtaField field = sample_eta(
        [](double t, double u) { return std::sqrt(2 * t * u + 1); }, 0.2, 1.2, 96, 0.3, 1.3, 96);
    Context ctx;
    ctx.dependent("eta", {"t", "u"});
    ParsedEquation pe = parse_equation("D(eta*eta_u, t) = 1", ctx);
    MisesEquation eq;
    eq.lhs = pe.lhs;
    eq.rhs = pe.rhs;
    VerificationReport rep = residual_on_field(eq, field, {}, 1e-4);
    EXPECT_TRUE(rep.pass) << rep.max_residual;
}

TEST(ResidualOnField, UnsupportedOrderIsSkipped) {
    EtaField field = sample_eta([](double, double) { return 1.0; }, 0.0, 1.0, 16, 0.3, 1.3, 16);
    Context ctx;
    ctx.dependent("eta", {"t", "u"});
    ParsedEquation pe = parse_equation("eta_t = eta_uuuu", ctx);
    MisesEquation eq;
    eq.lhs = pe.lhs;
    eq.rhs = pe.rhs;
    VerificationReport rep = residual_on_field(eq, field, {}, 1e-4);
    EXPECT_FALSE(rep.pass);
    ASSERT_FALSE(rep.notes.empty());
    EXPECT_NE(rep.notes[0].find("unsupported"), std::string::npos);
}

TEST(ExactChecks, Example3RoundingLevel) {
    VerificationReport rep = example3_exact(128, 1e-10);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.max_residual, 1e-12);
}

TEST(Closure, BurgersRunRecoversX) {
    NumericSolution sol = solve_burgers_front(257, 65);
    EtaField field = build_eta(sol, 128);
    VerificationReport rep = eta_quadrature_closure(sol, field, 1e-3);
    EXPECT_TRUE(rep.pass) << rep.max_residual;
}

TEST(Characteristic, SuiteIncludingNegativeControl) {
    auto checks = characteristic_shift_suite();
    ASSERT_EQ(checks.size(), 3u);
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.id;
    EXPECT_FALSE(checks[2].expect_invariant); // the wrong-shift law is the control
    EXPECT_GT(checks[2].shifted, 100 * checks[2].baseline);
}

TEST(Characteristic, BurgersConstantShift) {
    NumericSolution sol = solve_burgers_front(257, 129);
    ShiftCheck c = burgers_shift_check(sol, 0.1);
    EXPECT_TRUE(c.pass) << "baseline " << c.baseline << " shifted " << c.shifted;
}

TEST(Prandtl, ManufacturedFieldsBothViscosities) {
    for (double nu : {0.0, 1.0}) {
        auto reports = prandtl_manufactured(nu, 1e-10);
        ASSERT_EQ(reports.size(), 2u);
        for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.id << " " << r.max_residual;
    }
}

TEST(Correspondence, BurgersGridConvergence) {
    auto bc = burgers_correspondence({32, 64, 128}, 5e-3, 1.5);
    ASSERT_EQ(bc.levels.size(), 3u);
    EXPECT_TRUE(bc.pass) << bc.levels.back().max_residual << " orders " << bc.order_12 << ", "
                         << bc.order_23;
}

TEST(MonotoneCubicInterp, ReproducesSmoothData) {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 40; ++i) {
        double x = i / 40.0;
        xs.push_back(x);
        ys.push_back(std::exp(x));
    }
    MonotoneCubic interp(xs, ys);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        double x = 0.002 + 0.996 * i / 199.0;
        worst = std::max(worst, std::abs(interp(x) - std::exp(x)));
    }
    EXPECT_LE(worst, 1e-7);
    EXPECT_THROW(interp(2.0), NumericError);
}

} // namespace

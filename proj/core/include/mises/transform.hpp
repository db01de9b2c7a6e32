#ifndef MISES_TRANSFORM_HPP
#define MISES_TRANSFORM_HPP

#include <optional>
#include <string>
#include <vector>

#include "mises/equations.hpp"
#include "mises/prob_equal.hpp"

namespace mises {

// The transformation machines. Conventions shared by every operation:
//  - the old unknown u(t, x) becomes an independent variable, the new unknown
//    is eta(t, u) = u_x (or u_y in the three-variable case);
//  - derivatives with respect to u act jet-aware: eta -> eta_u -> eta_uu, ...,
//    with explicit u differentiated through the chain rule;
//  - when every term of a reduced equation carries a common positive power of
//    eta, that power is cancelled and the cancellation is logged;
//  - results are normalized to "eta_t = ..." whenever the coefficient of the
//    time jet is a nonzero rational.

/// Standard jet contexts used by the machines.
JetContext u_context_2d(const std::string& dep = "u", const std::string& mises_dir = "x");
JetContext u_context_3d(const std::string& dep = "u", const std::string& mises_dir = "y");
JetContext eta_context_2d(const std::string& dep = "eta");
JetContext eta_context_3d(const std::string& dep = "eta");

/// Order reduction of u_x u_tx - u_t u_xx = F.
MisesEquation reduce_mises_2_1(const BoundaryLayerEquation& eq);

/// Order reduction of u_x G_t - u_t G_x = F: the time jet is replaced by the
/// total t-derivative of the Mises image of G.
MisesEquation reduce_mises_2_5(const BoundaryLayerEquation& eq);

struct RfPairResult {
    MisesEquation equation;
    BacklundPair pair;
};

/// RF-pair for the evolution equation u_t = s(t) x u_x + F: divide by u_x,
/// differentiate in x, pass to the Mises variables.
RfPairResult rf_pair_evolution(const EvolutionEquation& eq);

BacklundPair backlund_pair(const EvolutionEquation& eq);

/// RF-pair for u_t = F + u_x int(G dz); the pair is nonlocal.
RfPairResult rf_pair_integrodiff(const IntegroDiffEquation& eq);

/// Rewrites w_tx = a(t) w w_xx + F(t, w_x, ...) as an integro-differential
/// equation in u = w_x with kernel G = a(t) u.
IntegroDiffEquation rewrite_mixed_to_integro(const Expr& a, const Expr& F_in_w_jets,
                                             const JetContext& w_ctx,
                                             const std::string& x0_name = "x0");

/// Three-variable reduction: A -> eta eta_t, B -> eta eta_x, y-jets prolonged.
MisesEquation reduce_mises_3var(const ThreeVarEquation& eq);

/// Dependent-variable change eta = new^p (p = -1 encodes eta = 1/zeta;
/// "eta^2 = Z" encodes eta = Z^(1/2)).
struct ChangeRule {
    std::string old_dep = "eta";
    std::string new_dep;
    Rational exponent{1};

    /// Accepts "eta=1/zeta", "eta=theta^(1/2)", "eta^2=Z", "eta=theta^1".
    static ChangeRule parse(const std::string& text);
};

MisesEquation change_dependent(const MisesEquation& eq, const ChangeRule& rule);

/// Substitution verification: new dependent new_dep(new_vars...), definitions
/// of the new variables in the old ones, and optional side relations used as
/// rewrite rules for derivatives of auxiliary functions.
struct SubstitutionSpec {
    std::string new_dep;
    std::vector<std::pair<std::string, Expr>> new_vars; // ordered (name, definition)
    std::vector<std::pair<Expr, Expr>> side_relations;  // FuncApp pattern -> replacement
};

struct VerifyResult {
    bool ok = false;
    std::string detail;
};

/// True iff `eq`, rewritten under the substitution with side relations
/// applied, equals `expected` up to an overall nonzero factor.
VerifyResult verify_substitution(const MisesEquation& eq, const SubstitutionSpec& subst,
                                 const ParsedEquation& expected, const ProbEqualOptions& opts = {});

/// The implicit solution int du / eta(t,u) = x + phi(t) of the coupling u_x = eta.
ParsedEquation implicit_solution_from_eta(const Expr& eta_expr, const std::string& u_name = "u",
                                          const std::string& u0_name = "u0",
                                          const std::string& phi_name = "phi");

/// Order reduction of the autonomous ODE F(u, u_x, ..., u_x^(n)) = 0 via
/// eta(u) = u_x.
MisesEquation reduce_ode_autonomous(const OdeEquation& ode);

struct OdeRfPairResult {
    MisesEquation equation; // eta * d/du G(u, eta, eta eta_u, ...) = 1
    BacklundPair pair;      // { G(u, eta, eta_x, ...) = x, u_x = eta }
};

/// RF-pair for the solved form G(u, u_x, ..., u_x^(n)) = x.
OdeRfPairResult rf_pair_ode(const OdeEquation& ode);

enum class Linearity { Linear, Quasilinear, FullyNonlinear };

struct LinearClassification {
    Linearity verdict = Linearity::FullyNonlinear;
    int degree = -1; // total polynomial degree in the unknown's jets, -1 if non-polynomial
    std::vector<std::pair<std::string, Expr>> coefficients; // jet -> coefficient (linear only)
    Expr constant_term;                                     // jet-free part (linear only)
};

/// Verdict by total polynomial degree in {unknown and its jets}: 1 is linear,
/// 2 quasilinear, anything higher or non-polynomial is fully nonlinear.
LinearClassification classify_linear(const MisesEquation& eq, const std::string& unknown);

std::string linearity_name(Linearity v);

/// Residual equality of two equations under probabilistic evaluation.
bool equations_equal(const MisesEquation& actual, const ParsedEquation& expected,
                     const ProbEqualOptions& opts = {});

/// Cancels the largest common positive power of `dep` shared by every term of
/// lhs and rhs; returns the cancelled power (0 if none).
int cancel_common_factor(Expr& lhs, Expr& rhs, const std::string& dep);

} // namespace mises

#endif

#ifndef MISES_EQUATIONS_HPP
#define MISES_EQUATIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mises/expr.hpp"
#include "mises/jet.hpp"
#include "mises/parser.hpp"

namespace mises {

struct MatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LogStep {
    std::string rule;   // stable rule id, e.g. "rf-pair"
    std::string detail; // human-readable note, e.g. "cancelled common factor eta"
};

struct TransformLog {
    std::vector<LogStep> steps;
    std::vector<std::string> warnings;
    void add(const std::string& rule, const std::string& detail = "") {
        steps.push_back({rule, detail});
    }
};

/// u_t = s(t) x u_x + F(t, u, u_x, ..., u_x^(n)); F free of u_t and explicit x.
struct EvolutionEquation {
    Expr s;
    Expr F;
    int order = 1;
};

/// u_x u_tx - u_t u_xx = F, or with G present: u_x G_t - u_t G_x = F.
struct BoundaryLayerEquation {
    Expr F;
    std::optional<Expr> G;
    int order = 1;
};

/// u_t = F + u_x * int(G(t, u, u_z, ...), z, x0, x)
struct IntegroDiffEquation {
    Expr F;
    Expr G;
    std::string dummy = "z";
    Expr x0;
};

/// F(t, x, u, u_y, ..., A, B) = 0 with placeholders A = u_y u_ty - u_t u_yy
/// and B = u_y u_xy - u_x u_yy.
struct ThreeVarEquation {
    Expr F; // uses symbols A and B
};

/// Autonomous F(u, u_x, ..., u_x^(n)) = 0, or solved form G(...) = x.
struct OdeEquation {
    bool solved_form = false;
    Expr body; // F for the autonomous form, G for the solved form
    int order = 1;
};

struct BacklundPair {
    Expr rel1_lhs, rel1_rhs; // first relation, e.g. u_t = s(t) x eta + F(...)
    Expr rel2_lhs, rel2_rhs; // the coupling u_x = eta
    std::string tag;
};

/// An equation over the von Mises variables (t[, x], u) with a named unknown.
struct MisesEquation {
    std::string dep = "eta";
    std::vector<std::string> independents{"t", "u"};
    Expr lhs, rhs;
    TransformLog log;

    Expr residual() const { return simplify(lhs - rhs); }
    JetContext jet_context(int max_order = 10) const {
        return JetContext{independents, dep, max_order, ""};
    }
    std::string str() const { return to_string(lhs) + " = " + to_string(rhs); }
};

// --- structural matchers ------------------------------------------------------
// Free-form parsed equations are normalized (everything on one side, the
// u_t / mixed-derivative / placeholder combinations collected) into the typed
// templates the transformation machines accept. All throw MatchError with a
// diagnostic naming the offending term.

/// Distributes products over sums (no power expansion); used before term
/// splitting so that inputs like (f + a*w)*w_xx match.
Expr expand_products(const Expr& e);

EvolutionEquation match_evolution(const ParsedEquation& eq, const JetContext& u_ctx);
BoundaryLayerEquation match_boundary_layer(const ParsedEquation& eq, const JetContext& u_ctx);
IntegroDiffEquation match_integro_diff(const ParsedEquation& eq, const JetContext& u_ctx,
                                       const std::string& dummy);
ThreeVarEquation match_three_var(const ParsedEquation& eq, const JetContext& u_ctx);
/// w_tx = a(t) w w_xx + F(t, w_x, ..., w_x^(n+1))  ->  (a, F in w-jets)
std::pair<Expr, Expr> match_mixed_derivative(const ParsedEquation& eq, const JetContext& w_ctx);
OdeEquation match_ode(const ParsedEquation& eq, const JetContext& u_ctx);

/// Solves an equation residual that is linear in `sym` with a coefficient
/// free of `sym`; returns the right-hand side of sym = ... or nullopt.
std::optional<Expr> solve_linear_for(const Expr& residual, const std::string& sym);

} // namespace mises

#endif

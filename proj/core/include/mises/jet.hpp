#ifndef MISES_JET_HPP
#define MISES_JET_HPP

#include <optional>
#include <string>
#include <vector>

#include "mises/expr.hpp"

namespace mises {

/// Jet-space bookkeeping for one dependent variable. Derivative symbols are
/// named by suffix with directions in the order of `independents`, so a
/// dependent u over (t, x) owns u, u_t, u_x, u_tx, u_xx, ... (never u_xt).
struct JetContext {
    std::vector<std::string> independents;
    std::string dependent;
    int max_order = 8;
    std::string mises_direction; // spatial direction whose derivative becomes the new unknown

    int direction_index(const std::string& dir) const;
};

struct MisesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonical jet symbol name for the given per-direction derivative counts.
std::string jet_name(const std::string& dependent, const std::vector<std::string>& independents,
                     const std::vector<int>& counts);

Expr jet_symbol(const JetContext& ctx, const std::vector<int>& counts);

/// Parses `name` as a jet of `dependent`; returns the per-direction counts
/// (all zero for the bare dependent), or nullopt when it is something else.
std::optional<std::vector<int>> match_jet(const std::string& name, const std::string& dependent,
                                          const std::vector<std::string>& independents);

/// Total derivative D_dir: promotes every jet of ctx.dependent one order in
/// `dir` and differentiates explicit occurrences of the independent variable.
/// Orders beyond ctx.max_order are still produced; a note lands in *warnings.
Expr total_derivative(const Expr& e, const std::string& dir, const JetContext& ctx,
                      std::vector<std::string>* warnings = nullptr);

/// Total derivative promoting the jets of several dependents at once.
Expr total_derivative_multi(const Expr& e, const std::string& dir,
                            const std::vector<JetContext>& ctxs,
                            std::vector<std::string>* warnings = nullptr);

/// Image of the k-th pure derivative of the old unknown under the von Mises
/// change of variables: k=1 gives eta, k=2 gives eta*eta_u, and in general
/// each step applies eta * d/du. `eta_ctx` names the new unknown and its
/// independents; `u_name` is the old unknown (now an independent variable).
Expr mises_prolong(int k, const JetContext& eta_ctx, const std::string& u_name);

/// Rewrites an expression over pure Mises-direction jets of ctx.dependent in
/// terms of the new unknown's jets. Jets in any other direction (u_t, u_tx,
/// ...) are rejected by name: their images depend on the equation class.
Expr to_mises(const Expr& e, const JetContext& u_ctx, const JetContext& eta_ctx);

/// Largest derivative order among jets of ctx.dependent appearing in e.
int max_jet_order(const Expr& e, const JetContext& ctx);

} // namespace mises

#endif

#include "mises/equations.hpp"

#include <algorithm>
#include <numeric>

namespace mises {

Expr expand_products(const Expr& e) {
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
        return e;
    case Kind::Sum: {
        std::vector<Expr> kids;
        for (const auto& k : e.kids()) kids.push_back(expand_products(k));
        return sum(std::move(kids));
    }
    case Kind::Product: {
        std::vector<std::vector<Expr>> partial{{}};
        for (const auto& k : e.kids()) {
            Expr f = expand_products(k);
            if (f.kind() == Kind::Sum) {
                std::vector<std::vector<Expr>> next;
                for (const auto& p : partial)
                    for (const auto& t : f.kids()) {
                        auto q = p;
                        q.push_back(t);
                        next.push_back(std::move(q));
                    }
                partial = std::move(next);
            } else {
                for (auto& p : partial) p.push_back(f);
            }
        }
        std::vector<Expr> terms;
        terms.reserve(partial.size());
        for (auto& p : partial) terms.push_back(product(std::move(p)));
        return sum(std::move(terms));
    }
    case Kind::Power: {
        Expr b = expand_products(e.base());
        // expand small positive integer powers of sums by direct distribution
        // (the canonical product() would merge the factors back into a power)
        if (b.kind() == Kind::Sum && e.exponent().is_integer()) {
            std::int64_t n = e.exponent().rat().num();
            if (n >= 2 && n <= 4) {
                std::vector<Expr> acc = sum_terms(b);
                for (std::int64_t i = 1; i < n; ++i) {
                    std::vector<Expr> next;
                    for (const auto& t : acc)
                        for (const auto& s : sum_terms(b)) next.push_back(product({t, s}));
                    acc = std::move(next);
                }
                return sum(std::move(acc));
            }
        }
        return power(b, e.exponent());
    }
    default:
        return e;
    }
}

std::optional<Expr> solve_linear_for(const Expr& residual, const std::string& sym) {
    Expr coeff = differentiate(residual, sym);
    if (coeff.is_zero() || contains_symbol(coeff, sym)) return std::nullopt;
    Expr rest = substitute(residual, {{sym, rational(0)}});
    if (contains_symbol(rest, sym)) return std::nullopt; // sym hidden in a function argument
    return simplify(-rest / coeff);
}

namespace {

// Divides `term` by `divisor` (a product of symbol powers); returns nullopt
// unless the division is exact, i.e. the quotient is free of those symbols.
std::optional<Expr> exact_quotient(const Expr& term, const std::vector<Expr>& divisor_syms) {
    std::vector<Expr> fs{term};
    for (const auto& d : divisor_syms) fs.push_back(power(d, rational(-1)));
    Expr q = simplify(product(std::move(fs)));
    for (const auto& d : divisor_syms)
        if (contains_symbol(q, d.name())) return std::nullopt;
    return q;
}

std::string jets_in(const Expr& e, const JetContext& ctx, bool pure_dir_only,
                    const std::string& dir) {
    // returns the first offending jet name, empty if none
    for (const auto& name : free_symbols(e)) {
        auto counts = match_jet(name, ctx.dependent, ctx.independents);
        if (!counts) continue;
        int total = std::accumulate(counts->begin(), counts->end(), 0);
        if (total == 0) continue;
        if (!pure_dir_only) return name;
        int di = ctx.direction_index(dir);
        if ((*counts)[di] != total) return name;
    }
    return "";
}

Expr solved_time_rhs(const ParsedEquation& eq, const JetContext& u_ctx, const char* form) {
    std::string ut = jet_name(u_ctx.dependent, u_ctx.independents,
                              [&] {
                                  std::vector<int> c(u_ctx.independents.size(), 0);
                                  c[u_ctx.direction_index("t")] = 1;
                                  return c;
                              }());
    Expr residual = expand_products(eq.residual());
    Expr coeff = differentiate(residual, ut);
    if (!coeff.is_rational() || coeff.is_zero())
        throw MatchError(std::string("equation is not of form ") + form + ": cannot solve for " + ut);
    Expr rest = substitute(residual, {{ut, rational(0)}});
    if (contains_symbol(rest, ut))
        throw MatchError(std::string("equation is not of form ") + form + ": nonlinear in " + ut);
    return expand_products(simplify(-rest / coeff));
}

} // namespace

EvolutionEquation match_evolution(const ParsedEquation& eq, const JetContext& u_ctx) {
    Expr rhs = solved_time_rhs(eq, u_ctx, "u_t = s(t) x u_x + F");

    const std::string x = u_ctx.mises_direction.empty() ? "x" : u_ctx.mises_direction;
    Expr ux = symbol(u_ctx.dependent + "_" + x);

    std::vector<Expr> s_parts;
    std::vector<Expr> f_parts;
    for (const auto& term : sum_terms(rhs)) {
        if (!contains_symbol(term, x)) {
            f_parts.push_back(term);
            continue;
        }
        auto q = exact_quotient(term, {symbol(x), ux});
        if (!q || !free_symbols(*q).empty()) {
            // allow only pure s(t)-type coefficients: opaque functions of t or constants
            bool ok = q.has_value();
            if (ok)
                for (const auto& n : free_symbols(*q)) ok = ok && n == "t";
            if (!ok)
                throw MatchError("explicit " + x + " in F is not of the evolution form: term " +
                                 to_string(term));
        }
        s_parts.push_back(*q);
    }
    EvolutionEquation out;
    out.s = sum(std::move(s_parts));
    out.F = sum(std::move(f_parts));

    JetContext jc = u_ctx;
    std::string bad = jets_in(out.F, jc, true, x);
    if (!bad.empty()) throw MatchError("F contains jet " + bad + " outside the evolution form");
    out.order = std::max(1, max_jet_order(out.F, jc));
    return out;
}

BoundaryLayerEquation match_boundary_layer(const ParsedEquation& eq, const JetContext& u_ctx) {
    const std::string& dep = u_ctx.dependent;
    const std::string x = u_ctx.mises_direction.empty() ? "x" : u_ctx.mises_direction;
    int ti = u_ctx.direction_index("t");
    int xi = u_ctx.direction_index(x);

    Expr residual = expand_products(eq.residual());

    // locate the unique mixed jet u_{t x^m}; G is then u_{x^m}
    std::string mixed;
    int m = 0;
    for (const auto& name : free_symbols(residual)) {
        auto counts = match_jet(name, dep, u_ctx.independents);
        if (!counts) continue;
        if ((*counts)[ti] == 1) {
            int rest = std::accumulate(counts->begin(), counts->end(), 0) - 1;
            if ((*counts)[xi] == rest && rest >= 1) {
                if (!mixed.empty())
                    throw MatchError("multiple mixed t-derivatives: " + mixed + " and " + name);
                mixed = name;
                m = rest;
            } else if (rest > 0) {
                throw MatchError("jet " + name + " does not fit the form u_x G_t - u_t G_x = F");
            }
        }
    }
    if (mixed.empty()) throw MatchError("no mixed t,x derivative found; not of the form (u_x G_t - u_t G_x = F)");

    auto jet_xk = [&](int k) {
        std::vector<int> c(u_ctx.independents.size(), 0);
        c[xi] = k;
        return symbol(jet_name(dep, u_ctx.independents, c));
    };
    Expr ut = [&] {
        std::vector<int> c(u_ctx.independents.size(), 0);
        c[ti] = 1;
        return symbol(jet_name(dep, u_ctx.independents, c));
    }();
    Expr ux = jet_xk(1);

    Expr coeff = differentiate(residual, mixed);
    Expr lambda = simplify(coeff / ux);
    if (!lambda.is_rational() || lambda.is_zero())
        throw MatchError("coefficient of " + mixed + " is " + to_string(coeff) +
                         ", expected a rational multiple of " + to_string(ux));

    Expr combo = ux * symbol(mixed) - ut * jet_xk(m + 1);
    Expr f = expand_products(simplify(-(residual / lambda - combo)));
    if (contains_symbol(f, ut.name()) || contains_symbol(f, mixed))
        throw MatchError("terms outside u_x G_t - u_t G_x still contain " + ut.name());

    JetContext jc = u_ctx;
    std::string bad = jets_in(f, jc, true, x);
    if (!bad.empty()) throw MatchError("F contains jet " + bad + " with no pointwise Mises image");

    BoundaryLayerEquation out;
    out.F = f;
    if (m > 1) out.G = jet_xk(m);
    out.order = std::max(1, max_jet_order(f, jc));
    return out;
}

IntegroDiffEquation match_integro_diff(const ParsedEquation& eq, const JetContext& u_ctx,
                                       const std::string& dummy) {
    Expr rhs = solved_time_rhs(eq, u_ctx, "u_t = F + u_x int(G)");
    const std::string x = u_ctx.mises_direction.empty() ? "x" : u_ctx.mises_direction;
    Expr ux = symbol(u_ctx.dependent + "_" + x);

    IntegroDiffEquation out;
    out.dummy = dummy;
    std::vector<Expr> f_parts;
    bool found = false;
    for (const auto& term : sum_terms(rhs)) {
        std::optional<Expr> integ;
        for (const auto& f : product_factors(term))
            if (f.kind() == Kind::Integral) integ = f;
        if (!integ) {
            f_parts.push_back(term);
            continue;
        }
        if (found) throw MatchError("more than one nonlocal term");
        found = true;
        Expr coeff = simplify(term / *integ);
        if (!(coeff == ux))
            throw MatchError("nonlocal term has coefficient " + to_string(coeff) +
                             ", expected " + to_string(ux));
        if (!integ->upper().is_symbol(x))
            throw MatchError("integral upper bound must be " + x);
        if (integ->name() != dummy)
            throw MatchError("integral dummy must be " + dummy);
        out.G = integ->integrand();
        out.x0 = integ->lower();
        JetContext gc = u_ctx;
        gc.mises_direction = dummy;
        std::string bad = jets_in(out.G, gc, true, dummy);
        if (!bad.empty())
            throw MatchError("integrand contains jet " + bad + " outside the dummy variable");
    }
    if (!found) throw MatchError("no nonlocal term of the form u_x int(G, " + dummy + ", x0, x)");
    out.F = sum(std::move(f_parts));
    if (contains_symbol(out.F, x))
        throw MatchError("explicit " + x + " in F is not admissible");
    return out;
}

ThreeVarEquation match_three_var(const ParsedEquation& eq, const JetContext& u_ctx) {
    const std::string& dep = u_ctx.dependent;
    const std::string y = u_ctx.mises_direction.empty() ? "y" : u_ctx.mises_direction;
    int ti = u_ctx.direction_index("t");
    int xi = u_ctx.direction_index("x");
    int yi = u_ctx.direction_index(y);

    auto jet_of = [&](std::initializer_list<std::pair<int, int>> setting) {
        std::vector<int> c(u_ctx.independents.size(), 0);
        for (auto [d, k] : setting) c[d] = k;
        return symbol(jet_name(dep, u_ctx.independents, c));
    };
    Expr ut = jet_of({{ti, 1}});
    Expr ux = jet_of({{xi, 1}});
    Expr uy = jet_of({{yi, 1}});
    Expr uyy = jet_of({{yi, 2}});
    Expr uty = jet_of({{ti, 1}, {yi, 1}});
    Expr uxy = jet_of({{xi, 1}, {yi, 1}});

    Expr residual = expand_products(eq.residual());

    Expr ca = simplify(differentiate(residual, uty.name()) / uy);
    Expr cb = simplify(differentiate(residual, uxy.name()) / uy);
    for (const auto& c : {ca, cb}) {
        std::string bad = jets_in(c, u_ctx, false, y);
        if (!bad.empty())
            throw MatchError("coefficient of a mixed combination contains jet " + bad);
    }

    Expr comboA = uy * uty - ut * uyy;
    Expr comboB = uy * uxy - ux * uyy;
    Expr rest = expand_products(simplify(residual - ca * comboA - cb * comboB));
    for (const auto& name : {ut.name(), ux.name(), uty.name(), uxy.name()})
        if (contains_symbol(rest, name))
            throw MatchError("stray jet " + name + " outside the A/B combinations");
    std::string bad = jets_in(rest, u_ctx, true, y);
    if (!bad.empty()) throw MatchError("stray jet " + bad + " outside the A/B combinations");

    ThreeVarEquation out;
    out.F = simplify(ca * symbol("A") + cb * symbol("B") + rest);
    return out;
}

std::pair<Expr, Expr> match_mixed_derivative(const ParsedEquation& eq, const JetContext& w_ctx) {
    const std::string& dep = w_ctx.dependent;
    int ti = w_ctx.direction_index("t");
    int xi = w_ctx.direction_index("x");

    auto jet_of = [&](int t, int x) {
        std::vector<int> c(w_ctx.independents.size(), 0);
        c[ti] = t;
        c[xi] = x;
        return symbol(jet_name(dep, w_ctx.independents, c));
    };
    Expr wtx = jet_of(1, 1);
    Expr wxx = jet_of(0, 2);

    Expr residual = expand_products(eq.residual());
    Expr coeff = differentiate(residual, wtx.name());
    if (!coeff.is_rational() || coeff.is_zero())
        throw MatchError("cannot solve for " + wtx.name() + "; not of the mixed-derivative form");
    Expr rhs = expand_products(simplify(-(substitute(residual, {{wtx.name(), rational(0)}})) / coeff));

    std::vector<Expr> a_parts, f_parts;
    for (const auto& term : sum_terms(rhs)) {
        if (!contains_symbol(term, dep)) {
            f_parts.push_back(term);
            continue;
        }
        auto q = exact_quotient(term, {symbol(dep), wxx});
        if (!q || contains_symbol(*q, dep))
            throw MatchError("term " + to_string(term) + " does not fit a(t) w w_xx + F(t, w_x, ...)");
        std::string bad = jets_in(*q, w_ctx, false, "x");
        if (!bad.empty())
            throw MatchError("coefficient of w w_xx contains jet " + bad);
        a_parts.push_back(*q);
    }
    Expr F = sum(std::move(f_parts));
    std::string bad = jets_in(F, w_ctx, true, "x");
    if (!bad.empty()) throw MatchError("F contains jet " + bad + " outside the mixed-derivative form");
    return {sum(std::move(a_parts)), F};
}

OdeEquation match_ode(const ParsedEquation& eq, const JetContext& u_ctx) {
    OdeEquation out;
    Expr rhs_x = eq.rhs;
    if (rhs_x.is_symbol("x")) {
        out.solved_form = true;
        out.body = eq.lhs;
    } else {
        out.solved_form = false;
        out.body = eq.residual();
        if (contains_symbol(out.body, "x"))
            throw MatchError("autonomous form must not contain x explicitly");
    }
    out.order = std::max(1, max_jet_order(out.body, u_ctx));
    return out;
}

} // namespace mises

#include "mises/transform.hpp"

#include <algorithm>
#include <numeric>

namespace mises {

JetContext u_context_2d(const std::string& dep, const std::string& mises_dir) {
    return JetContext{{"t", mises_dir}, dep, 10, mises_dir};
}
JetContext u_context_3d(const std::string& dep, const std::string& mises_dir) {
    return JetContext{{"t", "x", mises_dir}, dep, 10, mises_dir};
}
JetContext eta_context_2d(const std::string& dep) {
    return JetContext{{"t", "u"}, dep, 10, ""};
}
JetContext eta_context_3d(const std::string& dep) {
    return JetContext{{"t", "x", "u"}, dep, 10, ""};
}

int cancel_common_factor(Expr& lhs, Expr& rhs, const std::string& dep) {
    std::int64_t min_pow = -1;
    for (const Expr* side : {&lhs, &rhs})
        for (const auto& term : sum_terms(*side)) {
            std::int64_t p = factor_exponent(term, dep);
            min_pow = min_pow < 0 ? p : std::min(min_pow, p);
            if (min_pow == 0) return 0;
        }
    if (min_pow <= 0) return 0;
    Expr divisor = power(symbol(dep), rational(-min_pow));
    lhs = expand_products(simplify(lhs * divisor));
    rhs = expand_products(simplify(rhs * divisor));
    return static_cast<int>(min_pow);
}

namespace {

Expr eta_t_symbol(const MisesEquation& eq) {
    std::vector<int> counts(eq.independents.size(), 0);
    for (size_t i = 0; i < eq.independents.size(); ++i)
        if (eq.independents[i] == "t") counts[i] = 1;
    return symbol(jet_name(eq.dep, eq.independents, counts));
}

// True when e contains no derivative jets of dep (the bare unknown is fine).
bool free_of_proper_jets(const Expr& e, const std::string& dep,
                         const std::vector<std::string>& indeps) {
    for (const auto& name : free_symbols(e)) {
        auto counts = match_jet(name, dep, indeps);
        if (!counts) continue;
        for (int c : *counts)
            if (c > 0) return false;
    }
    return true;
}

// Normalize to dep_t = ... when the time-jet coefficient is invertible on the
// working domain (free of derivative jets, e.g. rational or a power of dep).
void normalize_time_solved(MisesEquation& eq) {
    Expr et = eta_t_symbol(eq);
    Expr residual = eq.residual();
    Expr coeff = differentiate(residual, et.name());
    if (coeff.is_zero() || !free_of_proper_jets(coeff, eq.dep, eq.independents)) return;
    Expr rest = substitute(residual, {{et.name(), rational(0)}});
    if (contains_symbol(rest, et.name())) return;
    eq.lhs = et;
    eq.rhs = expand_products(simplify(-rest / coeff));
}

void finish(MisesEquation& eq) {
    int k = cancel_common_factor(eq.lhs, eq.rhs, eq.dep);
    if (k > 0)
        eq.log.add("cancel-common-factor",
                   "cancelled " + eq.dep + (k > 1 ? "^" + std::to_string(k) : ""));
    normalize_time_solved(eq);
}

// Renames pure Mises-direction jets u_x^(k) -> eta_x^(k-1) for the pair relations.
Expr rename_jets_to_eta(const Expr& e, const JetContext& u_ctx, const std::string& eta) {
    int mi = u_ctx.direction_index(u_ctx.mises_direction);
    std::map<std::string, Expr> map;
    for (const auto& name : free_symbols(e)) {
        auto counts = match_jet(name, u_ctx.dependent, u_ctx.independents);
        if (!counts) continue;
        int total = std::accumulate(counts->begin(), counts->end(), 0);
        if (total == 0) continue;
        if ((*counts)[mi] != total)
            throw MisesError("jet " + name + " cannot be renamed for the pair relation");
        std::string nm = eta;
        if (total > 1) {
            nm += '_';
            for (int k = 0; k < total - 1; ++k) nm += u_ctx.mises_direction;
        }
        map.emplace(name, symbol(nm));
    }
    return substitute(e, map);
}

} // namespace

MisesEquation reduce_mises_2_1(const BoundaryLayerEquation& eq) {
    if (eq.G.has_value())
        throw MisesError("equation carries a G-combination; use reduce_mises_2_5");
    JetContext uc = u_context_2d();
    JetContext ec = eta_context_2d();
    MisesEquation out;
    out.lhs = simplify(symbol("eta") * symbol("eta_t"));
    out.rhs = simplify(to_mises(eq.F, uc, ec));
    out.log.add("mises-reduce", "eta eta_t = F in the Mises variables");
    finish(out);
    return out;
}

MisesEquation reduce_mises_2_5(const BoundaryLayerEquation& eq) {
    if (!eq.G.has_value()) return reduce_mises_2_1(BoundaryLayerEquation{eq.F, std::nullopt, eq.order});
    JetContext uc = u_context_2d();
    JetContext ec = eta_context_2d();
    MisesEquation out;
    Expr gm = to_mises(*eq.G, uc, ec);
    out.lhs = simplify(symbol("eta") * total_derivative(gm, "t", ec, &out.log.warnings));
    out.rhs = simplify(to_mises(eq.F, uc, ec));
    out.log.add("mises-reduce-g", "time jet replaced by the total t-derivative of G = " + to_string(gm));
    finish(out);
    return out;
}

BacklundPair backlund_pair(const EvolutionEquation& eq) {
    JetContext uc = u_context_2d();
    BacklundPair pair;
    Expr f_eta = rename_jets_to_eta(eq.F, uc, "eta");
    pair.rel1_lhs = symbol("u_t");
    pair.rel1_rhs = simplify(eq.s * symbol("x") * symbol("eta") + f_eta);
    pair.rel2_lhs = symbol("u_x");
    pair.rel2_rhs = symbol("eta");
    pair.tag = "backlund-pair";
    return pair;
}

RfPairResult rf_pair_evolution(const EvolutionEquation& eq) {
    JetContext uc = u_context_2d();
    JetContext ec = eta_context_2d();
    Expr eta = symbol("eta");
    Expr fm = to_mises(eq.F, uc, ec);

    MisesEquation out;
    out.lhs = symbol("eta_t");
    Expr du = total_derivative(simplify(fm / eta), "u", ec, &out.log.warnings);
    out.rhs = simplify(eq.s * eta + eta * eta * du);
    out.log.add("rf-pair", "divide by u_x, differentiate in x, pass to the Mises variables");
    finish(out);
    return {out, backlund_pair(eq)};
}

RfPairResult rf_pair_integrodiff(const IntegroDiffEquation& eq) {
    JetContext uc = u_context_2d();
    JetContext ec = eta_context_2d();
    JetContext gc{{"t", eq.dummy}, "u", 10, eq.dummy}; // integrand jets live in the dummy variable
    Expr eta = symbol("eta");
    Expr fm = to_mises(eq.F, uc, ec);
    Expr gm = to_mises(eq.G, gc, ec);

    MisesEquation out;
    out.lhs = symbol("eta_t");
    Expr du = total_derivative(simplify(fm / eta), "u", ec, &out.log.warnings);
    out.rhs = simplify(eta * eta * du + eta * gm);
    out.log.add("rf-pair-integro", "nonlocal RF-pair; kernel image G = " + to_string(gm));
    finish(out);

    BacklundPair pair;
    pair.rel1_lhs = symbol("u_t");
    pair.rel1_rhs = simplify(rename_jets_to_eta(eq.F, uc, "eta") +
                             eta * integral(eq.G, eq.dummy, eq.x0, symbol("x")));
    pair.rel2_lhs = symbol("u_x");
    pair.rel2_rhs = eta;
    pair.tag = "nonlocal-backlund-pair";
    return {out, pair};
}

IntegroDiffEquation rewrite_mixed_to_integro(const Expr& a, const Expr& F_in_w_jets,
                                             const JetContext& w_ctx, const std::string& x0_name) {
    int mi = w_ctx.direction_index("x");
    std::map<std::string, Expr> map;
    for (const auto& name : free_symbols(F_in_w_jets)) {
        auto counts = match_jet(name, w_ctx.dependent, w_ctx.independents);
        if (!counts) continue;
        int total = std::accumulate(counts->begin(), counts->end(), 0);
        if (total == 0)
            throw MisesError("bare " + w_ctx.dependent + " in F; not of the mixed-derivative form");
        if ((*counts)[mi] != total || total < 1)
            throw MisesError("jet " + name + " does not fit the mixed-derivative form");
        std::string nm = "u";
        if (total > 1) {
            nm += '_';
            for (int k = 0; k < total - 1; ++k) nm += 'x';
        }
        map.emplace(name, symbol(nm));
    }
    IntegroDiffEquation out;
    out.F = substitute(F_in_w_jets, map);
    out.G = simplify(a * symbol("u"));
    out.dummy = "z";
    out.x0 = symbol(x0_name);
    return out;
}

MisesEquation reduce_mises_3var(const ThreeVarEquation& eq) {
    JetContext uc = u_context_3d();
    JetContext ec = eta_context_3d();

    std::map<std::string, Expr> map;
    map.emplace("A", simplify(symbol("eta") * symbol("eta_t")));
    map.emplace("B", simplify(symbol("eta") * symbol("eta_x")));
    int yi = uc.direction_index("y");
    for (const auto& name : free_symbols(eq.F)) {
        if (name == "A" || name == "B") continue;
        auto counts = match_jet(name, uc.dependent, uc.independents);
        if (!counts) continue;
        int total = std::accumulate(counts->begin(), counts->end(), 0);
        if (total == 0) continue;
        if ((*counts)[yi] != total)
            throw MisesError("stray mixed jet " + name + " outside the A/B combinations");
        map.emplace(name, mises_prolong(total, ec, "u"));
    }

    MisesEquation out;
    out.dep = "eta";
    out.independents = {"t", "x", "u"};
    out.lhs = substitute(eq.F, map);
    out.rhs = rational(0);
    out.log.add("mises-3var", "A -> eta eta_t, B -> eta eta_x, y-jets prolonged");
    finish(out);
    return out;
}

ChangeRule ChangeRule::parse(const std::string& text) {
    auto fail = [&] { throw MisesError("unrecognized dependent-change rule: " + text); };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto eqpos = s.find('=');
    if (eqpos == std::string::npos) fail();
    std::string left = s.substr(0, eqpos);
    std::string right = s.substr(eqpos + 1);

    ChangeRule rule;
    Rational left_pow(1);
    auto car = left.find('^');
    if (car != std::string::npos) {
        left_pow = Rational(std::stoll(left.substr(car + 1)));
        left = left.substr(0, car);
    }
    rule.old_dep = left;
    if (rule.old_dep.empty()) fail();

    Rational right_pow(1);
    bool reciprocal = false;
    if (right.rfind("1/", 0) == 0) {
        reciprocal = true;
        right = right.substr(2);
    }
    car = right.find('^');
    if (car != std::string::npos) {
        std::string p = right.substr(car + 1);
        right = right.substr(0, car);
        if (!p.empty() && p.front() == '(') {
            if (p.back() != ')') fail();
            p = p.substr(1, p.size() - 2);
        }
        auto slash = p.find('/');
        if (slash == std::string::npos) right_pow = Rational(std::stoll(p));
        else right_pow = Rational(std::stoll(p.substr(0, slash)), std::stoll(p.substr(slash + 1)));
    }
    rule.new_dep = right;
    if (rule.new_dep.empty()) fail();

    // old^a = new^b (possibly reciprocal)  =>  old = new^(±b/a)
    Rational p = right_pow / left_pow;
    if (reciprocal) p = -p;
    if (p.is_zero()) fail();
    rule.exponent = p;
    return rule;
}

MisesEquation change_dependent(const MisesEquation& eq, const ChangeRule& rule) {
    if (rule.old_dep != eq.dep)
        throw MisesError("rule changes " + rule.old_dep + " but the equation unknown is " + eq.dep);

    MisesEquation out;
    out.dep = rule.new_dep;
    out.independents = eq.independents;
    out.log = eq.log;

    JetContext nc{eq.independents, rule.new_dep, 12, ""};
    Expr base = power(symbol(rule.new_dep), rational(rule.exponent));

    std::map<std::string, Expr> map;
    std::set<std::string> names;
    collect_free_symbols(eq.lhs, names);
    collect_free_symbols(eq.rhs, names);
    for (const auto& name : names) {
        auto counts = match_jet(name, eq.dep, eq.independents);
        if (!counts) continue;
        Expr image = base;
        for (size_t d = 0; d < counts->size(); ++d)
            for (int k = 0; k < (*counts)[d]; ++k)
                image = total_derivative(image, eq.independents[d], nc, &out.log.warnings);
        map.emplace(name, simplify(image));
    }
    out.lhs = substitute(eq.lhs, map);
    out.rhs = substitute(eq.rhs, map);
    out.log.add("change-dependent", eq.dep + " = " + to_string(base));
    normalize_time_solved(out);
    return out;
}

namespace {

Expr apply_side_relations(Expr e, const std::vector<std::pair<Expr, Expr>>& relations) {
    for (int pass = 0; pass < 8; ++pass) {
        Expr before = e;
        for (const auto& [pattern, replacement] : relations) {
            if (pattern.kind() != Kind::FuncApp)
                throw MisesError("side relation left side must be a function derivative");
            // rewrite every application matching the pattern's name and index,
            // substituting the pattern's arguments for the actual ones
            struct Rewriter {
                const Expr& pat;
                const Expr& rep;
                Expr walk(const Expr& x) {
                    switch (x.kind()) {
                    case Kind::Rational:
                    case Kind::Symbol:
                        return x;
                    case Kind::FuncApp: {
                        std::vector<Expr> args;
                        for (const auto& k : x.kids()) args.push_back(walk(k));
                        if (x.name() == pat.name() && x.dindex() == pat.dindex()) {
                            std::map<std::string, Expr> binds;
                            for (size_t i = 0; i < pat.kids().size(); ++i) {
                                if (pat.kids()[i].kind() != Kind::Symbol)
                                    throw MisesError("side relation arguments must be plain symbols");
                                binds[pat.kids()[i].name()] = args[i];
                            }
                            return substitute(rep, binds);
                        }
                        return funcapp(x.name(), std::move(args), x.dindex());
                    }
                    case Kind::Sum: {
                        std::vector<Expr> kids;
                        for (const auto& k : x.kids()) kids.push_back(walk(k));
                        return sum(std::move(kids));
                    }
                    case Kind::Product: {
                        std::vector<Expr> kids;
                        for (const auto& k : x.kids()) kids.push_back(walk(k));
                        return product(std::move(kids));
                    }
                    case Kind::Power:
                        return power(walk(x.base()), walk(x.exponent()));
                    case Kind::Integral:
                        return integral(walk(x.integrand()), x.name(), walk(x.lower()), walk(x.upper()));
                    }
                    return x;
                }
            } rw{pattern, replacement};
            e = rw.walk(e);
        }
        if (e == before) break;
    }
    return e;
}

Expr rename_funcapp_to_jets(const Expr& e, const std::string& dep,
                            const std::vector<std::string>& indeps) {
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
        return e;
    case Kind::FuncApp: {
        if (e.name() == dep) return symbol(jet_name(dep, indeps, e.dindex()));
        std::vector<Expr> args;
        for (const auto& k : e.kids()) args.push_back(rename_funcapp_to_jets(k, dep, indeps));
        return funcapp(e.name(), std::move(args), e.dindex());
    }
    case Kind::Sum: {
        std::vector<Expr> kids;
        for (const auto& k : e.kids()) kids.push_back(rename_funcapp_to_jets(k, dep, indeps));
        return sum(std::move(kids));
    }
    case Kind::Product: {
        std::vector<Expr> kids;
        for (const auto& k : e.kids()) kids.push_back(rename_funcapp_to_jets(k, dep, indeps));
        return product(std::move(kids));
    }
    case Kind::Power:
        return power(rename_funcapp_to_jets(e.base(), dep, indeps),
                     rename_funcapp_to_jets(e.exponent(), dep, indeps));
    case Kind::Integral:
        return integral(rename_funcapp_to_jets(e.integrand(), dep, indeps), e.name(),
                        rename_funcapp_to_jets(e.lower(), dep, indeps),
                        rename_funcapp_to_jets(e.upper(), dep, indeps));
    }
    return e;
}

} // namespace

VerifyResult verify_substitution(const MisesEquation& eq, const SubstitutionSpec& subst,
                                 const ParsedEquation& expected, const ProbEqualOptions& opts) {
    std::vector<std::string> new_names;
    std::vector<Expr> defs;
    for (const auto& [n, d] : subst.new_vars) {
        new_names.push_back(n);
        defs.push_back(d);
    }

    // sanity: the change of variables must move with the old independents
    {
        ProbEqualOptions o = opts;
        bool moves = false;
        for (const auto& d : defs)
            for (const auto& v : eq.independents)
                if (contains_symbol(d, v)) moves = true;
        if (!moves) return {false, "substitution does not involve the old variables"};
        Expr jac = defs.back();
        if (equal_probabilistic(differentiate(jac, "t"), rational(0), o) &&
            !contains_symbol(jac, "t"))
            return {false, "substitution is not invertible: the new time variable is constant"};
    }

    Expr base = funcapp(subst.new_dep, defs);
    std::map<std::string, Expr> map;
    std::set<std::string> names;
    collect_free_symbols(eq.lhs, names);
    collect_free_symbols(eq.rhs, names);
    for (const auto& name : names) {
        auto counts = match_jet(name, eq.dep, eq.independents);
        if (!counts) continue;
        Expr image = base;
        for (size_t d = 0; d < counts->size(); ++d)
            for (int k = 0; k < (*counts)[d]; ++k)
                image = differentiate(image, eq.independents[d]);
        map.emplace(name, simplify(image));
    }

    Expr residual_a = substitute(eq.residual(), map);
    residual_a = simplify(apply_side_relations(residual_a, subst.side_relations));
    residual_a = simplify(rename_funcapp_to_jets(residual_a, subst.new_dep, new_names));

    Expr residual_e = expected.residual();
    // allow explicit new variables in the expected equation
    std::map<std::string, Expr> newvar_defs;
    for (size_t i = 0; i < new_names.size(); ++i) newvar_defs[new_names[i]] = defs[i];
    residual_e = substitute(residual_e, newvar_defs);

    // equality modulo an overall nonzero factor, via the time-jet coefficient
    std::vector<int> tcounts(new_names.size(), 0);
    tcounts.back() = 1;
    std::string ztau = jet_name(subst.new_dep, new_names, tcounts);
    Expr ca = differentiate(residual_a, ztau);
    Expr ce = differentiate(residual_e, ztau);
    if (ca.is_zero() || ce.is_zero())
        return {false, "time jet " + ztau + " missing from one of the equations"};

    Expr lhs = simplify(residual_a * ce);
    Expr rhs = simplify(residual_e * ca);
    bool ok = equal_probabilistic(lhs, rhs, opts);
    return {ok, ok ? "equal up to the factor " + to_string(simplify(ca / ce))
                   : "residuals differ beyond an overall factor"};
}

ParsedEquation implicit_solution_from_eta(const Expr& eta_expr, const std::string& u_name,
                                          const std::string& u0_name, const std::string& phi_name) {
    Expr integrand = substitute(power(eta_expr, rational(-1)), {{u_name, symbol("w")}});
    Expr lhs = integral(integrand, "w", symbol(u0_name), symbol(u_name));
    Expr rhs = simplify(symbol("x") + funcapp(phi_name, {symbol("t")}));
    return {simplify(lhs), rhs};
}

namespace {

std::map<std::string, Expr> ode_prolong_map(const Expr& body, const JetContext& u_ctx) {
    JetContext ec{{"u"}, "eta", 10, ""};
    std::map<std::string, Expr> map;
    for (const auto& name : free_symbols(body)) {
        auto counts = match_jet(name, u_ctx.dependent, u_ctx.independents);
        if (!counts) continue;
        int total = std::accumulate(counts->begin(), counts->end(), 0);
        if (total == 0) continue;
        map.emplace(name, mises_prolong(total, ec, "u"));
    }
    return map;
}

} // namespace

MisesEquation reduce_ode_autonomous(const OdeEquation& ode) {
    if (ode.solved_form) throw MisesError("autonomous reduction expects F(u, u_x, ...) = 0");
    JetContext uc{{"x"}, "u", 10, "x"};
    MisesEquation out;
    out.dep = "eta";
    out.independents = {"u"};
    out.lhs = substitute(ode.body, ode_prolong_map(ode.body, uc));
    out.rhs = rational(0);
    out.log.add("ode-reduce", "eta(u) = u_x");
    return out;
}

OdeRfPairResult rf_pair_ode(const OdeEquation& ode) {
    if (!ode.solved_form) throw MisesError("the ODE RF-pair expects the solved form G(...) = x");
    JetContext uc{{"x"}, "u", 10, "x"};
    JetContext ec{{"u"}, "eta", 10, ""};

    Expr g_sub = substitute(ode.body, ode_prolong_map(ode.body, uc));
    MisesEquation out;
    out.dep = "eta";
    out.independents = {"u"};
    out.lhs = simplify(symbol("eta") * total_derivative(g_sub, "u", ec, &out.log.warnings));
    out.rhs = rational(1);
    out.log.add("ode-rf-pair", "differentiate the solved form, then eta(u) = u_x");

    BacklundPair pair;
    pair.rel1_lhs = simplify(rename_jets_to_eta(ode.body, uc, "eta"));
    pair.rel1_rhs = symbol("x");
    pair.rel2_lhs = symbol("u_x");
    pair.rel2_rhs = symbol("eta");
    pair.tag = "ode-backlund-pair";
    return {out, pair};
}

std::string linearity_name(Linearity v) {
    switch (v) {
    case Linearity::Linear: return "linear";
    case Linearity::Quasilinear: return "quasilinear";
    case Linearity::FullyNonlinear: return "fully nonlinear";
    }
    return "?";
}

LinearClassification classify_linear(const MisesEquation& eq, const std::string& unknown) {
    JetContext jc{eq.independents, unknown, 12, ""};
    Expr residual = expand_products(eq.residual());

    std::set<std::string> jets;
    for (const auto& name : free_symbols(residual))
        if (match_jet(name, unknown, eq.independents)) jets.insert(name);

    LinearClassification out;
    out.degree = polynomial_degree(residual, jets);
    if (out.degree < 0 || out.degree > 2) {
        out.verdict = Linearity::FullyNonlinear;
        return out;
    }
    if (out.degree == 2) {
        out.verdict = Linearity::Quasilinear;
        return out;
    }
    out.verdict = Linearity::Linear;

    // normalize the time-jet coefficient to 1 when possible
    Expr et = eta_t_symbol(MisesEquation{unknown, eq.independents, residual, rational(0), {}});
    Expr scale = differentiate(residual, et.name());
    bool rescale = !scale.is_zero() && !contains_symbol(scale, unknown);
    std::map<std::string, Expr> zeros;
    for (const auto& j : jets) zeros[j] = rational(0);
    for (const auto& j : jets) {
        Expr c = differentiate(residual, j);
        if (rescale) c = simplify(c / scale);
        if (!c.is_zero()) out.coefficients.emplace_back(j, c);
    }
    out.constant_term = substitute(residual, zeros);
    if (rescale) out.constant_term = simplify(out.constant_term / scale);
    return out;
}

bool equations_equal(const MisesEquation& actual, const ParsedEquation& expected,
                     const ProbEqualOptions& opts) {
    // put both equations through the same time-jet normalization, so that
    // arrangements differing by an invertible factor compare as equal
    MisesEquation a = actual;
    normalize_time_solved(a);
    MisesEquation e;
    e.dep = actual.dep;
    e.independents = actual.independents;
    e.lhs = expected.lhs;
    e.rhs = expected.rhs;
    normalize_time_solved(e);
    return equal_probabilistic(a.residual(), e.residual(), opts);
}

} // namespace mises

#include "mises/expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace mises {

namespace {

int kind_rank(Kind k) {
    switch (k) {
    case Kind::Rational: return 0;
    case Kind::Symbol:   return 1;
    case Kind::Power:    return 2;
    case Kind::Product:  return 3;
    case Kind::Sum:      return 4;
    case Kind::FuncApp:  return 5;
    case Kind::Integral: return 6;
    }
    return 7;
}

int compare_vec(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() < b.size()) return -1;
    if (a.size() > b.size()) return 1;
    return 0;
}

} // namespace

bool operator==(const Expr& a, const Expr& b) {
    if (a.raw() == b.raw()) return true;
    return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
    if (a.raw() == b.raw()) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
    case Kind::Rational: {
        if (a.rat() == b.rat()) return 0;
        return a.rat() < b.rat() ? -1 : 1;
    }
    case Kind::Symbol:
        return a.name().compare(b.name());
    case Kind::Power:
    case Kind::Product:
    case Kind::Sum:
        return compare_vec(a.kids(), b.kids());
    case Kind::FuncApp: {
        int c = a.name().compare(b.name());
        if (c != 0) return c;
        if (a.dindex() != b.dindex()) return a.dindex() < b.dindex() ? -1 : 1;
        return compare_vec(a.kids(), b.kids());
    }
    case Kind::Integral: {
        int c = a.name().compare(b.name());
        if (c != 0) return c;
        return compare_vec(a.kids(), b.kids());
    }
    }
    return 0;
}

// --- builders ---------------------------------------------------------------

Expr rational(const Rational& r) {
    ExprNode n;
    n.kind = Kind::Rational;
    n.rat = r;
    return Expr::make(std::move(n));
}
Expr rational(std::int64_t v) { return rational(Rational(v)); }
Expr rational(std::int64_t num, std::int64_t den) { return rational(Rational(num, den)); }

Expr symbol(const std::string& name) {
    ExprNode n;
    n.kind = Kind::Symbol;
    n.name = name;
    return Expr::make(std::move(n));
}

namespace {

Expr make_power_node(const Expr& base, const Expr& exp) {
    ExprNode n;
    n.kind = Kind::Power;
    n.kids = {base, exp};
    return Expr::make(std::move(n));
}

// Splits a canonical term into (rational coefficient, monic remainder).
std::pair<Rational, Expr> split_coeff(const Expr& term) {
    if (term.kind() == Kind::Rational) return {term.rat(), rational(1)};
    if (term.kind() == Kind::Product && term.kids()[0].kind() == Kind::Rational) {
        std::vector<Expr> rest(term.kids().begin() + 1, term.kids().end());
        if (rest.size() == 1) return {term.kids()[0].rat(), rest[0]};
        ExprNode n;
        n.kind = Kind::Product;
        n.kids = std::move(rest);
        return {term.kids()[0].rat(), Expr::make(std::move(n))};
    }
    return {Rational(1), term};
}

// Splits a canonical factor into (base, exponent).
std::pair<Expr, Expr> split_power(const Expr& f) {
    if (f.kind() == Kind::Power) return {f.base(), f.exponent()};
    return {f, rational(1)};
}

} // namespace

Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (!t.valid()) throw std::logic_error("sum of invalid Expr");
        if (t.kind() == Kind::Sum) {
            for (const auto& k : t.kids()) flat.push_back(k);
        } else {
            flat.push_back(t);
        }
    }

    Rational constant(0);
    std::vector<std::pair<Expr, Rational>> monics; // monic part -> collected coefficient
    for (const auto& t : flat) {
        if (t.kind() == Kind::Rational) {
            constant = constant + t.rat();
            continue;
        }
        auto [c, m] = split_coeff(t);
        monics.emplace_back(m, c);
    }
    std::sort(monics.begin(), monics.end(),
              [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });

    std::vector<Expr> out;
    bool repass = false;
    size_t i = 0;
    while (i < monics.size()) {
        Rational c = monics[i].second;
        size_t j = i + 1;
        while (j < monics.size() && compare(monics[j].first, monics[i].first) == 0) {
            c = c + monics[j].second;
            ++j;
        }
        if (!c.is_zero()) {
            if (c.is_one()) {
                // a Sum-shaped monic resurfaces when its coefficients merge to 1
                repass = repass || monics[i].first.kind() == Kind::Sum;
                out.push_back(monics[i].first);
            } else {
                out.push_back(product({rational(c), monics[i].first}));
            }
        }
        i = j;
    }
    if (!constant.is_zero()) out.push_back(rational(constant));
    if (repass) return sum(std::move(out));
    std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });

    if (out.empty()) return rational(0);
    if (out.size() == 1) return out[0];
    ExprNode n;
    n.kind = Kind::Sum;
    n.kids = std::move(out);
    return Expr::make(std::move(n));
}

Expr product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    for (auto& f : factors) {
        if (!f.valid()) throw std::logic_error("product of invalid Expr");
        if (f.kind() == Kind::Product) {
            for (const auto& k : f.kids()) flat.push_back(k);
        } else {
            flat.push_back(f);
        }
    }

    Rational coeff(1);
    std::vector<std::pair<Expr, std::vector<Expr>>> bases; // base -> exponents to sum
    for (const auto& f : flat) {
        if (f.kind() == Kind::Rational) {
            if (f.rat().is_zero()) return rational(0);
            coeff = coeff * f.rat();
            continue;
        }
        auto [b, e] = split_power(f);
        bases.emplace_back(b, std::vector<Expr>{e});
    }
    std::sort(bases.begin(), bases.end(),
              [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });

    std::vector<Expr> out;
    bool repass = false;
    size_t i = 0;
    while (i < bases.size()) {
        std::vector<Expr> exps = bases[i].second;
        size_t j = i + 1;
        while (j < bases.size() && compare(bases[j].first, bases[i].first) == 0) {
            exps.push_back(bases[j].second[0]);
            ++j;
        }
        Expr merged = power(bases[i].first, sum(std::move(exps)));
        if (merged.kind() == Kind::Rational) {
            if (merged.rat().is_zero()) return rational(0);
            coeff = coeff * merged.rat();
        } else if (merged.kind() == Kind::Product) {
            // power() folded e.g. (2*x)^k back into factors whose bases may
            // collide with ones already collected
            repass = true;
            for (const auto& k : merged.kids()) {
                if (k.kind() == Kind::Rational) coeff = coeff * k.rat();
                else out.push_back(k);
            }
        } else {
            out.push_back(merged);
        }
        i = j;
    }
    if (repass) {
        out.push_back(rational(coeff));
        return product(std::move(out));
    }
    std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });

    if (coeff.is_zero()) return rational(0);
    if (out.empty()) return rational(coeff);
    if (coeff.is_one() && out.size() == 1) return out[0];
    std::vector<Expr> withc;
    if (!coeff.is_one()) withc.push_back(rational(coeff));
    withc.insert(withc.end(), out.begin(), out.end());
    if (withc.size() == 1) return withc[0];
    ExprNode n;
    n.kind = Kind::Product;
    n.kids = std::move(withc);
    return Expr::make(std::move(n));
}

// Power canonicalization assumes positive real bases (the working domain is
// bounded away from zero), so (x^a)^b -> x^(ab) and (xy)^a -> x^a y^a hold.
Expr power(const Expr& base, const Expr& exp) {
    if (!base.valid() || !exp.valid()) throw std::logic_error("power of invalid Expr");
    if (exp.is_rational()) {
        if (exp.rat().is_zero()) return rational(1);
        if (exp.rat().is_one()) return base;
    }
    if (base.is_rational()) {
        const Rational& b = base.rat();
        if (b.is_zero()) {
            if (exp.is_rational() && !exp.rat().is_negative() && !exp.rat().is_zero()) return rational(0);
            return make_power_node(base, exp); // 0^negative / 0^symbolic stay unevaluated
        }
        if (b.is_one()) return rational(1);
        if (exp.is_rational() && exp.rat().is_integer()) return rational(b.pow_int(exp.rat().num()));
    }
    if (base.kind() == Kind::Power) return power(base.base(), product({base.exponent(), exp}));
    if (base.kind() == Kind::Product) {
        std::vector<Expr> parts;
        parts.reserve(base.kids().size());
        for (const auto& f : base.kids()) parts.push_back(power(f, exp));
        return product(std::move(parts));
    }
    return make_power_node(base, exp);
}

Expr power(const Expr& base, const Rational& exp) { return power(base, rational(exp)); }

Expr funcapp(const std::string& name, std::vector<Expr> args, std::vector<int> dindex) {
    if (dindex.empty()) dindex.assign(args.size(), 0);
    if (dindex.size() != args.size())
        throw std::logic_error("funcapp derivative index arity mismatch for " + name);
    ExprNode n;
    n.kind = Kind::FuncApp;
    n.name = name;
    n.kids = std::move(args);
    n.dindex = std::move(dindex);
    return Expr::make(std::move(n));
}

Expr integral(const Expr& integrand, const std::string& dummy, const Expr& lo, const Expr& hi) {
    if (integrand.is_zero()) return rational(0);
    // A rational integrand cannot depend on the dummy, so the integral folds.
    if (integrand.is_rational())
        return product({integrand, sum({hi, product({rational(-1), lo})})});
    ExprNode n;
    n.kind = Kind::Integral;
    n.name = dummy;
    n.kids = {integrand, lo, hi};
    return Expr::make(std::move(n));
}

// --- simplify / substitute / differentiate ----------------------------------

Expr simplify(const Expr& e) {
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
        return e;
    case Kind::Sum: {
        std::vector<Expr> kids;
        kids.reserve(e.kids().size());
        for (const auto& k : e.kids()) kids.push_back(simplify(k));
        return sum(std::move(kids));
    }
    case Kind::Product: {
        std::vector<Expr> kids;
        kids.reserve(e.kids().size());
        for (const auto& k : e.kids()) kids.push_back(simplify(k));
        return product(std::move(kids));
    }
    case Kind::Power:
        return power(simplify(e.base()), simplify(e.exponent()));
    case Kind::FuncApp: {
        std::vector<Expr> args;
        args.reserve(e.kids().size());
        for (const auto& k : e.kids()) args.push_back(simplify(k));
        return funcapp(e.name(), std::move(args), e.dindex());
    }
    case Kind::Integral:
        return integral(simplify(e.integrand()), e.name(), simplify(e.lower()), simplify(e.upper()));
    }
    return e;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    if (bindings.empty()) return simplify(e);
    switch (e.kind()) {
    case Kind::Rational:
        return e;
    case Kind::Symbol: {
        auto it = bindings.find(e.name());
        return it != bindings.end() ? it->second : e;
    }
    case Kind::Sum: {
        std::vector<Expr> kids;
        kids.reserve(e.kids().size());
        for (const auto& k : e.kids()) kids.push_back(substitute(k, bindings));
        return sum(std::move(kids));
    }
    case Kind::Product: {
        std::vector<Expr> kids;
        kids.reserve(e.kids().size());
        for (const auto& k : e.kids()) kids.push_back(substitute(k, bindings));
        return product(std::move(kids));
    }
    case Kind::Power:
        return power(substitute(e.base(), bindings), substitute(e.exponent(), bindings));
    case Kind::FuncApp: {
        std::vector<Expr> args;
        args.reserve(e.kids().size());
        for (const auto& k : e.kids()) args.push_back(substitute(k, bindings));
        return funcapp(e.name(), std::move(args), e.dindex());
    }
    case Kind::Integral: {
        auto inner = bindings;
        inner.erase(e.name()); // dummy shadows outer bindings
        return integral(substitute(e.integrand(), inner), e.name(),
                        substitute(e.lower(), bindings), substitute(e.upper(), bindings));
    }
    }
    return e;
}

Expr substitute_funcapp(const Expr& e, const std::string& name,
                        const std::vector<std::string>& params, const Expr& body) {
    switch (e.kind()) {
    case Kind::Rational:
    case Kind::Symbol:
        return e;
    case Kind::Sum:
    case Kind::Product:
    case Kind::Power: {
        std::vector<Expr> kids;
        kids.reserve(e.kids().size());
        for (const auto& k : e.kids()) kids.push_back(substitute_funcapp(k, name, params, body));
        if (e.kind() == Kind::Sum) return sum(std::move(kids));
        if (e.kind() == Kind::Product) return product(std::move(kids));
        return power(kids[0], kids[1]);
    }
    case Kind::FuncApp: {
        std::vector<Expr> args;
        args.reserve(e.kids().size());
        for (const auto& k : e.kids()) args.push_back(substitute_funcapp(k, name, params, body));
        if (e.name() != name) return funcapp(e.name(), std::move(args), e.dindex());
        if (params.size() != args.size())
            throw std::logic_error("function binding arity mismatch for " + name);
        Expr d = body;
        for (size_t i = 0; i < params.size(); ++i)
            for (int k = 0; k < e.dindex()[i]; ++k) d = differentiate(d, params[i]);
        std::map<std::string, Expr> binds;
        for (size_t i = 0; i < params.size(); ++i) binds[params[i]] = args[i];
        return substitute(d, binds);
    }
    case Kind::Integral:
        return integral(substitute_funcapp(e.integrand(), name, params, body), e.name(),
                        substitute_funcapp(e.lower(), name, params, body),
                        substitute_funcapp(e.upper(), name, params, body));
    }
    return e;
}

Expr differentiate(const Expr& e, const std::string& v) {
    switch (e.kind()) {
    case Kind::Rational:
        return rational(0);
    case Kind::Symbol:
        return e.name() == v ? rational(1) : rational(0);
    case Kind::Sum: {
        std::vector<Expr> kids;
        kids.reserve(e.kids().size());
        for (const auto& k : e.kids()) kids.push_back(differentiate(k, v));
        return sum(std::move(kids));
    }
    case Kind::Product: {
        std::vector<Expr> terms;
        for (size_t i = 0; i < e.kids().size(); ++i) {
            Expr d = differentiate(e.kids()[i], v);
            if (d.is_zero()) continue;
            std::vector<Expr> fs;
            for (size_t j = 0; j < e.kids().size(); ++j) fs.push_back(j == i ? d : e.kids()[j]);
            terms.push_back(product(std::move(fs)));
        }
        return sum(std::move(terms));
    }
    case Kind::Power: {
        const Expr& b = e.base();
        const Expr& p = e.exponent();
        if (contains_symbol(p, v))
            throw std::domain_error("unsupported: exponent depends on differentiation variable " + v);
        Expr db = differentiate(b, v);
        if (db.is_zero()) return rational(0);
        return product({p, power(b, sum({p, rational(-1)})), db});
    }
    case Kind::FuncApp: {
        std::vector<Expr> terms;
        for (size_t i = 0; i < e.kids().size(); ++i) {
            Expr da = differentiate(e.kids()[i], v);
            if (da.is_zero()) continue;
            std::vector<int> di = e.dindex();
            di[i] += 1;
            terms.push_back(product({funcapp(e.name(), e.kids(), std::move(di)), da}));
        }
        return sum(std::move(terms));
    }
    case Kind::Integral: {
        if (e.name() == v) return rational(0); // v is shadowed by the dummy
        Expr dlo = differentiate(e.lower(), v);
        if (!dlo.is_zero())
            throw std::domain_error("unsupported: integral lower bound depends on " + v);
        std::vector<Expr> terms;
        Expr dhi = differentiate(e.upper(), v);
        if (!dhi.is_zero()) {
            std::map<std::string, Expr> at_hi{{e.name(), e.upper()}};
            terms.push_back(product({substitute(e.integrand(), at_hi), dhi}));
        }
        Expr dint = differentiate(e.integrand(), v);
        if (!dint.is_zero()) terms.push_back(integral(dint, e.name(), e.lower(), e.upper()));
        return sum(std::move(terms));
    }
    }
    return rational(0);
}

// --- queries ----------------------------------------------------------------

void collect_free_symbols(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
    case Kind::Rational:
        return;
    case Kind::Symbol:
        out.insert(e.name());
        return;
    case Kind::Integral: {
        std::set<std::string> inner;
        collect_free_symbols(e.integrand(), inner);
        inner.erase(e.name());
        out.insert(inner.begin(), inner.end());
        collect_free_symbols(e.lower(), out);
        collect_free_symbols(e.upper(), out);
        return;
    }
    default:
        for (const auto& k : e.kids()) collect_free_symbols(k, out);
    }
}

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_free_symbols(e, out);
    return out;
}

bool contains_symbol(const Expr& e, const std::string& name) {
    switch (e.kind()) {
    case Kind::Rational:
        return false;
    case Kind::Symbol:
        return e.name() == name;
    case Kind::Integral:
        if (e.name() != name && contains_symbol(e.integrand(), name)) return true;
        return contains_symbol(e.lower(), name) || contains_symbol(e.upper(), name);
    default:
        for (const auto& k : e.kids())
            if (contains_symbol(k, name)) return true;
        return false;
    }
}

void collect_func_arities(const Expr& e, std::map<std::string, int>& out) {
    if (e.kind() == Kind::FuncApp) {
        auto [it, inserted] = out.emplace(e.name(), static_cast<int>(e.kids().size()));
        if (!inserted && it->second != static_cast<int>(e.kids().size()))
            throw std::logic_error("function " + e.name() + " used with inconsistent arity");
    }
    if (e.kind() != Kind::Rational && e.kind() != Kind::Symbol)
        for (const auto& k : e.kids()) collect_func_arities(k, out);
}

std::vector<Expr> sum_terms(const Expr& e) {
    if (e.is_zero()) return {};
    if (e.kind() == Kind::Sum) return e.kids();
    return {e};
}

std::vector<Expr> product_factors(const Expr& e) {
    if (e.kind() == Kind::Product) return e.kids();
    return {e};
}

std::int64_t factor_exponent(const Expr& term, const std::string& sym) {
    for (const auto& f : product_factors(term)) {
        if (f.is_symbol(sym)) return 1;
        if (f.kind() == Kind::Power && f.base().is_symbol(sym) && f.exponent().is_integer()) {
            std::int64_t k = f.exponent().rat().num();
            return k > 0 ? k : 0;
        }
    }
    return 0;
}

int polynomial_degree(const Expr& e, const std::set<std::string>& vars) {
    switch (e.kind()) {
    case Kind::Rational:
        return 0;
    case Kind::Symbol:
        return vars.count(e.name()) ? 1 : 0;
    case Kind::Sum: {
        int deg = 0;
        for (const auto& k : e.kids()) {
            int d = polynomial_degree(k, vars);
            if (d < 0) return -1;
            deg = std::max(deg, d);
        }
        return deg;
    }
    case Kind::Product: {
        int deg = 0;
        for (const auto& k : e.kids()) {
            int d = polynomial_degree(k, vars);
            if (d < 0) return -1;
            deg += d;
        }
        return deg;
    }
    case Kind::Power: {
        int db = polynomial_degree(e.base(), vars);
        if (db < 0) return -1;
        if (db == 0) {
            // exponent must also be free of the tracked symbols
            for (const auto& v : vars)
                if (contains_symbol(e.exponent(), v)) return -1;
            return 0;
        }
        if (!e.exponent().is_integer() || e.exponent().rat().is_negative()) return -1;
        return db * static_cast<int>(e.exponent().rat().num());
    }
    case Kind::FuncApp:
    case Kind::Integral:
        for (const auto& v : vars)
            if (contains_symbol(e, v)) return -1;
        return 0;
    }
    return -1;
}

// --- printing ---------------------------------------------------------------

namespace {

bool is_atom(const Expr& e) {
    switch (e.kind()) {
    case Kind::Symbol:
    case Kind::FuncApp:
    case Kind::Integral:
        return true;
    case Kind::Rational:
        return !e.rat().is_negative() && e.rat().is_integer();
    default:
        return false;
    }
}

void print_expr(const Expr& e, std::ostream& os);

void print_base(const Expr& e, std::ostream& os) {
    if (is_atom(e)) {
        print_expr(e, os);
    } else {
        os << '(';
        print_expr(e, os);
        os << ')';
    }
}

void print_power(const Expr& e, std::ostream& os) {
    print_base(e.base(), os);
    os << '^';
    const Expr& p = e.exponent();
    bool plain_int = p.is_rational() && p.rat().is_integer() && !p.rat().is_negative();
    bool plain_sym = p.kind() == Kind::Symbol;
    if (plain_int || plain_sym) {
        print_expr(p, os);
    } else {
        os << '(';
        print_expr(p, os);
        os << ')';
    }
}

void print_factor(const Expr& e, std::ostream& os) {
    if (e.kind() == Kind::Power) print_power(e, os);
    else if (e.kind() == Kind::Sum || e.kind() == Kind::Product ||
             (e.kind() == Kind::Rational && (e.rat().is_negative() || !e.rat().is_integer()))) {
        os << '(';
        print_expr(e, os);
        os << ')';
    } else {
        print_expr(e, os);
    }
}

void print_product(const Expr& e, std::ostream& os) {
    const auto& ks = e.kids();
    size_t start = 0;
    if (ks[0].kind() == Kind::Rational) {
        const Rational& r = ks[0].rat();
        if (r == Rational(-1)) {
            os << '-';
        } else {
            os << r.str() << '*';
        }
        start = 1;
    }
    for (size_t i = start; i < ks.size(); ++i) {
        if (i > start) os << '*';
        print_factor(ks[i], os);
    }
}

void print_expr(const Expr& e, std::ostream& os) {
    switch (e.kind()) {
    case Kind::Rational:
        os << e.rat().str();
        return;
    case Kind::Symbol:
        os << e.name();
        return;
    case Kind::Power:
        print_power(e, os);
        return;
    case Kind::Product:
        print_product(e, os);
        return;
    case Kind::Sum: {
        auto print_monic = [&os](const Expr& m) {
            if (m.kind() == Kind::Sum) {
                os << '(';
                print_expr(m, os);
                os << ')';
            } else if (m.kind() == Kind::Product) {
                print_product(m, os);
            } else {
                print_expr(m, os);
            }
        };
        bool first = true;
        for (const auto& t : e.kids()) {
            auto [c, m] = split_coeff(t);
            bool neg = c.is_negative();
            if (first) {
                if (neg) os << '-';
                first = false;
            } else {
                os << (neg ? " - " : " + ");
            }
            Rational mag = neg ? -c : c;
            if (m.is_one()) {
                os << mag.str();
            } else if (mag.is_one()) {
                print_monic(m);
            } else {
                if (mag.is_integer()) os << mag.str() << '*';
                else os << '(' << mag.str() << ")*";
                print_monic(m);
            }
        }
        return;
    }
    case Kind::FuncApp: {
        os << e.name();
        bool unary_ticks = e.kids().size() == 1 && e.dindex()[0] >= 1 && e.dindex()[0] <= 3;
        bool all_zero = true;
        for (int d : e.dindex()) all_zero = all_zero && d == 0;
        if (unary_ticks) {
            for (int k = 0; k < e.dindex()[0]; ++k) os << '\'';
        } else if (!all_zero) {
            os << '[';
            for (size_t i = 0; i < e.dindex().size(); ++i) {
                if (i) os << ',';
                os << e.dindex()[i];
            }
            os << ']';
        }
        os << '(';
        for (size_t i = 0; i < e.kids().size(); ++i) {
            if (i) os << ", ";
            print_expr(e.kids()[i], os);
        }
        os << ')';
        return;
    }
    case Kind::Integral:
        os << "int(";
        print_expr(e.integrand(), os);
        os << ", " << e.name() << ", ";
        print_expr(e.lower(), os);
        os << ", ";
        print_expr(e.upper(), os);
        os << ')';
        return;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print_expr(e, os);
    return os.str();
}

} // namespace mises

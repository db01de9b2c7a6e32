#include "mises/eval.hpp"

#include <algorithm>
#include <cmath>

namespace mises {

double Polynomial::eval(const std::vector<double>& args) const {
    if (static_cast<int>(args.size()) != arity)
        throw EvalError("polynomial arity mismatch");
    double acc = 0.0;
    for (const auto& t : terms) {
        double m = t.coeff;
        for (int i = 0; i < arity; ++i)
            for (int k = 0; k < t.expo[i]; ++k) m *= args[i];
        acc += m;
    }
    return acc;
}

Polynomial Polynomial::derivative(const std::vector<int>& multi) const {
    Polynomial out;
    out.arity = arity;
    for (const auto& t : terms) {
        double c = t.coeff;
        std::vector<int> e = t.expo;
        bool dead = false;
        for (int i = 0; i < arity && !dead; ++i) {
            for (int k = 0; k < multi[i]; ++k) {
                if (e[i] == 0) {
                    dead = true;
                    break;
                }
                c *= e[i];
                e[i] -= 1;
            }
        }
        if (!dead && c != 0.0) out.terms.push_back({c, e});
    }
    return out;
}

Polynomial Polynomial::identity(int arity) {
    Polynomial p;
    p.arity = arity;
    std::vector<int> e(arity, 0);
    e[0] = 1;
    p.terms.push_back({1.0, e});
    return p;
}

Polynomial Polynomial::constant(double c, int arity) {
    Polynomial p;
    p.arity = arity;
    p.terms.push_back({c, std::vector<int>(arity, 0)});
    return p;
}

Polynomial Polynomial::from_coeffs(const std::vector<double>& coeffs) {
    Polynomial p;
    p.arity = 1;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0.0) p.terms.push_back({coeffs[i], {static_cast<int>(i)}});
    return p;
}

namespace {

// 32-point Gauss-Legendre nodes on [-1, 1], computed once by Newton iteration.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    GaussLegendre() {
        const int n = 32;
        nodes.resize(n);
        weights.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre& gauss_legendre() {
    static GaussLegendre gl;
    return gl;
}

double checked_pow(double base, double exp) {
    double r = std::pow(base, exp);
    if (!std::isfinite(r)) throw EvalError("power evaluation produced a non-finite value");
    return r;
}

} // namespace

double eval_numeric(const Expr& e, const EvalEnv& env) {
    switch (e.kind()) {
    case Kind::Rational:
        return e.rat().to_double();
    case Kind::Symbol: {
        auto it = env.vars.find(e.name());
        if (it == env.vars.end()) throw EvalError("missing binding for symbol " + e.name());
        return it->second;
    }
    case Kind::Sum: {
        double acc = 0.0;
        for (const auto& k : e.kids()) acc += eval_numeric(k, env);
        return acc;
    }
    case Kind::Product: {
        double acc = 1.0;
        for (const auto& k : e.kids()) acc *= eval_numeric(k, env);
        return acc;
    }
    case Kind::Power: {
        double b = eval_numeric(e.base(), env);
        double p = eval_numeric(e.exponent(), env);
        if (b == 0.0 && p < 0.0) throw EvalError("division by zero");
        if (b < 0.0) {
            if (e.exponent().is_integer()) {
                double r = std::pow(b, static_cast<double>(e.exponent().rat().num()));
                if (!std::isfinite(r)) throw EvalError("power overflow");
                return r;
            }
            double rounded = std::nearbyint(p);
            if (std::abs(p - rounded) < 1e-12) return checked_pow(b, rounded);
            throw EvalError("fractional power of negative base");
        }
        return checked_pow(b, p);
    }
    case Kind::FuncApp: {
        auto it = env.funcs.find(e.name());
        if (it == env.funcs.end()) throw EvalError("missing binding for function " + e.name());
        std::vector<double> args;
        args.reserve(e.kids().size());
        for (const auto& k : e.kids()) args.push_back(eval_numeric(k, env));
        bool plain = std::all_of(e.dindex().begin(), e.dindex().end(), [](int d) { return d == 0; });
        if (plain) return it->second.eval(args);
        return it->second.derivative(e.dindex()).eval(args);
    }
    case Kind::Integral: {
        double lo = eval_numeric(e.lower(), env);
        double hi = eval_numeric(e.upper(), env);
        const auto& gl = gauss_legendre();
        EvalEnv inner = env;
        double mid = 0.5 * (hi + lo);
        double half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            inner.vars[e.name()] = mid + half * gl.nodes[i];
            acc += gl.weights[i] * eval_numeric(e.integrand(), inner);
        }
        return acc * half;
    }
    }
    throw EvalError("unreachable expression kind");
}

// --- compiled tape -----------------------------------------------------------

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& slot_names,
                           const std::map<std::string, Polynomial>& funcs)
    : names_(slot_names) {
    compile(e, funcs);
    regs_.resize(prog_.size());
}

int CompiledExpr::slot_index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

int CompiledExpr::compile(const Expr& e, const std::map<std::string, Polynomial>& funcs) {
    auto push = [this](Ins ins) {
        prog_.push_back(std::move(ins));
        return static_cast<int>(prog_.size()) - 1;
    };
    switch (e.kind()) {
    case Kind::Rational: {
        Ins i;
        i.op = Op::Const;
        i.value = e.rat().to_double();
        return push(std::move(i));
    }
    case Kind::Symbol: {
        int s = slot_index(e.name());
        if (s < 0) throw EvalError("no slot for symbol " + e.name());
        Ins i;
        i.op = Op::Var;
        i.a = s;
        return push(std::move(i));
    }
    case Kind::Sum:
    case Kind::Product: {
        int acc = compile(e.kids()[0], funcs);
        for (size_t k = 1; k < e.kids().size(); ++k) {
            int rhs = compile(e.kids()[k], funcs);
            Ins i;
            i.op = e.kind() == Kind::Sum ? Op::Add : Op::Mul;
            i.a = acc;
            i.b = rhs;
            acc = push(std::move(i));
        }
        return acc;
    }
    case Kind::Power: {
        int b = compile(e.base(), funcs);
        if (e.exponent().is_integer()) {
            Ins i;
            i.op = Op::PowInt;
            i.a = b;
            i.ipow = static_cast<int>(e.exponent().rat().num());
            return push(std::move(i));
        }
        if (!e.exponent().is_rational())
            throw EvalError("compiled expressions need numeric exponents");
        Ins i;
        i.op = Op::Pow;
        i.a = b;
        i.value = e.exponent().rat().to_double();
        return push(std::move(i));
    }
    case Kind::FuncApp: {
        auto it = funcs.find(e.name());
        if (it == funcs.end()) throw EvalError("no binding for function " + e.name());
        bool plain = std::all_of(e.dindex().begin(), e.dindex().end(), [](int d) { return d == 0; });
        funcs_.push_back(plain ? it->second : it->second.derivative(e.dindex()));
        Ins i;
        i.op = Op::Call;
        i.func = static_cast<int>(funcs_.size()) - 1;
        for (const auto& a : e.kids()) i.argregs.push_back(compile(a, funcs));
        return push(std::move(i));
    }
    case Kind::Integral:
        throw EvalError("integrals are not supported in compiled expressions");
    }
    throw EvalError("unreachable expression kind");
}

double CompiledExpr::eval(const std::vector<double>& slots) const {
    for (size_t pc = 0; pc < prog_.size(); ++pc) {
        const Ins& i = prog_[pc];
        double r = 0.0;
        switch (i.op) {
        case Op::Const: r = i.value; break;
        case Op::Var:   r = slots[i.a]; break;
        case Op::Add:   r = regs_[i.a] + regs_[i.b]; break;
        case Op::Mul:   r = regs_[i.a] * regs_[i.b]; break;
        case Op::PowInt: {
            double b = regs_[i.a];
            int n = i.ipow;
            bool inv = n < 0;
            if (inv) n = -n;
            double acc = 1.0;
            while (n > 0) {
                if (n & 1) acc *= b;
                b *= b;
                n >>= 1;
            }
            r = inv ? 1.0 / acc : acc;
            break;
        }
        case Op::Pow: r = std::pow(regs_[i.a], i.value); break;
        case Op::Call: {
            std::vector<double> args;
            args.reserve(i.argregs.size());
            for (int a : i.argregs) args.push_back(regs_[a]);
            r = funcs_[i.func].eval(args);
            break;
        }
        }
        regs_[pc] = r;
    }
    return prog_.empty() ? 0.0 : regs_.back();
}

} // namespace mises

#ifndef MISES_EVAL_HPP
#define MISES_EVAL_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mises/expr.hpp"

namespace mises {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Multivariate polynomial with exact formal derivatives; the concrete stand-in
/// for opaque function symbols during numeric evaluation.
struct Polynomial {
    struct Term {
        double coeff;
        std::vector<int> expo; // one exponent per argument
    };
    int arity = 1;
    std::vector<Term> terms;

    double eval(const std::vector<double>& args) const;
    Polynomial derivative(const std::vector<int>& multi) const;

    /// p(x) = x  (identity in the first argument)
    static Polynomial identity(int arity = 1);
    static Polynomial constant(double c, int arity = 1);
    /// univariate from low-to-high coefficients
    static Polynomial from_coeffs(const std::vector<double>& coeffs);
};

struct EvalEnv {
    std::map<std::string, double> vars;
    std::map<std::string, Polynomial> funcs;
};

/// IEEE double evaluation; rational constants convert in one division.
/// Integrals evaluate by 32-point Gauss-Legendre quadrature.
double eval_numeric(const Expr& e, const EvalEnv& env);

/// Expression compiled to a flat instruction tape over named slots, for the
/// inner loops of the numeric verifier. Integrals are not supported here.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const std::vector<std::string>& slot_names,
                 const std::map<std::string, Polynomial>& funcs);

    double eval(const std::vector<double>& slots) const;
    int slot_index(const std::string& name) const;

private:
    enum class Op { Const, Var, Add, Mul, PowInt, Pow, Call };
    struct Ins {
        Op op;
        int a = -1;
        int b = -1;
        double value = 0.0;
        int ipow = 0;
        int func = -1;
        std::vector<int> argregs;
    };
    std::vector<std::string> names_;
    std::vector<Ins> prog_;
    std::vector<Polynomial> funcs_;
    mutable std::vector<double> regs_;

    int compile(const Expr& e, const std::map<std::string, Polynomial>& funcs);
};

} // namespace mises

#endif

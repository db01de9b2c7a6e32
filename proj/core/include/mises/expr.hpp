#ifndef MISES_EXPR_HPP
#define MISES_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mises/rational.hpp"

namespace mises {

// Canonical symbolic expressions. Sums and products are flattened n-ary
// nodes sorted under a fixed total order; numeric coefficients are collected
// so a Product carries at most one Rational factor and a Sum at most one
// Rational term. Exponents are Expr values (normally Rational, but symbolic
// exponents such as u_x^n are allowed). All values are immutable.

enum class Kind {
    Rational,
    Symbol,
    Power,
    Product,
    Sum,
    FuncApp,
    Integral,
};

class Expr;

struct ExprNode {
    Kind kind;
    Rational rat;                // Kind::Rational
    std::string name;            // Symbol / FuncApp name / Integral dummy
    std::vector<Expr> kids;      // Sum terms, Product factors, Power {base, exponent},
                                 // FuncApp args, Integral {integrand, lo, hi}
    std::vector<int> dindex;     // FuncApp derivative multi-index (one entry per argument)
};

class Expr {
public:
    Expr() = default;

    Kind kind() const { return node_->kind; }
    bool valid() const { return node_ != nullptr; }

    const Rational& rat() const { return node_->rat; }
    const std::string& name() const { return node_->name; }
    const std::vector<Expr>& kids() const { return node_->kids; }
    const std::vector<int>& dindex() const { return node_->dindex; }

    bool is_rational() const { return kind() == Kind::Rational; }
    bool is_zero() const { return is_rational() && rat().is_zero(); }
    bool is_one() const { return is_rational() && rat().is_one(); }
    bool is_symbol(const std::string& n) const { return kind() == Kind::Symbol && name() == n; }
    bool is_integer() const { return is_rational() && rat().is_integer(); }

    const Expr& base() const { return node_->kids[0]; }      // Power
    const Expr& exponent() const { return node_->kids[1]; }  // Power
    const Expr& integrand() const { return node_->kids[0]; } // Integral
    const Expr& lower() const { return node_->kids[1]; }     // Integral
    const Expr& upper() const { return node_->kids[2]; }     // Integral

    const ExprNode* raw() const { return node_.get(); }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    static Expr make(ExprNode&& n) {
        Expr e;
        e.node_ = std::make_shared<const ExprNode>(std::move(n));
        return e;
    }

private:
    std::shared_ptr<const ExprNode> node_;
};

// Strict total order used for canonical sorting; returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);

// --- canonicalizing builders ---------------------------------------------

Expr rational(std::int64_t n);
Expr rational(const Rational& r);
Expr rational(std::int64_t n, std::int64_t d);
Expr symbol(const std::string& name);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr power(const Expr& base, const Expr& exp);
Expr power(const Expr& base, const Rational& exp);
Expr funcapp(const std::string& name, std::vector<Expr> args, std::vector<int> dindex = {});
Expr integral(const Expr& integrand, const std::string& dummy, const Expr& lo, const Expr& hi);

inline Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sum({a, product({rational(-1), b})}); }
inline Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, rational(-1))}); }
inline Expr operator-(const Expr& a) { return product({rational(-1), a}); }

// --- core operations -------------------------------------------------------

/// Rebuilds the expression through the canonicalizing builders; idempotent.
Expr simplify(const Expr& e);

/// Exact partial derivative with respect to a plain symbol. Opaque functions
/// get an incremented derivative multi-index; integrals follow the Leibniz
/// rule with a variable upper bound (a v-dependent lower bound is an error).
Expr differentiate(const Expr& e, const std::string& v);

/// Simultaneous symbol substitution followed by simplification.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Replaces applications of an opaque function by a concrete expression:
/// FuncApp(name, args, k) becomes d^k(body)/d(params)^k with params -> args.
Expr substitute_funcapp(const Expr& e, const std::string& name,
                        const std::vector<std::string>& params, const Expr& body);

void collect_free_symbols(const Expr& e, std::set<std::string>& out);
std::set<std::string> free_symbols(const Expr& e);
bool contains_symbol(const Expr& e, const std::string& name);

/// Opaque function names with arities; throws on inconsistent arity use.
void collect_func_arities(const Expr& e, std::map<std::string, int>& out);

/// Terms of a Sum (the expression itself when not a Sum; empty for zero).
std::vector<Expr> sum_terms(const Expr& e);
/// Factors of a Product (the expression itself when not a Product).
std::vector<Expr> product_factors(const Expr& e);

/// Integer exponent of `sym` as an explicit factor of a term; 0 when absent
/// or when the exponent is not a positive integer.
std::int64_t factor_exponent(const Expr& term, const std::string& sym);

/// Total polynomial degree in the given symbols, or -1 when the dependence
/// is not polynomial (negative/fractional powers, symbols inside opaque
/// function arguments or integrals).
int polynomial_degree(const Expr& e, const std::set<std::string>& vars);

/// Canonical text form in the equation DSL; parse(print(e)) == e.
std::string to_string(const Expr& e);

} // namespace mises

#endif

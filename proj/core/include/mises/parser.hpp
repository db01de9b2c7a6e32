#ifndef MISES_PARSER_HPP
#define MISES_PARSER_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mises/expr.hpp"
#include "mises/jet.hpp"

namespace mises {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    size_t pos;
};

/// Variable declarations for the equation DSL. Every identifier appearing in
/// a parsed expression must be declared as a plain symbol, an opaque function
/// (with fixed arity), or a jet dependent with its independent variables.
class Context {
public:
    Context& symbol(const std::string& name) {
        symbols_.insert(name);
        return *this;
    }
    Context& symbols(std::initializer_list<std::string> names) {
        for (const auto& n : names) symbols_.insert(n);
        return *this;
    }
    Context& function(const std::string& name, int arity) {
        functions_[name] = arity;
        return *this;
    }
    Context& dependent(const std::string& name, std::vector<std::string> independents) {
        for (const auto& v : independents) symbols_.insert(v); // independents double as symbols
        dependents_.emplace_back(name, std::move(independents));
        return *this;
    }

    bool has_symbol(const std::string& n) const { return symbols_.count(n) > 0; }
    const std::map<std::string, int>& functions() const { return functions_; }
    const std::vector<std::pair<std::string, std::vector<std::string>>>& dependents() const {
        return dependents_;
    }
    const std::vector<std::string>* independents_of(const std::string& dep) const {
        for (const auto& [n, v] : dependents_)
            if (n == dep) return &v;
        return nullptr;
    }
    std::vector<JetContext> jet_contexts(int max_order = 8) const {
        std::vector<JetContext> out;
        for (const auto& [n, v] : dependents_) out.push_back(JetContext{v, n, max_order, ""});
        return out;
    }

private:
    std::set<std::string> symbols_;
    std::map<std::string, int> functions_;
    std::vector<std::pair<std::string, std::vector<std::string>>> dependents_;
};

/// Parses one expression in the equation DSL. Grammar highlights:
///   identifiers  [a-zA-Z][a-zA-Z0-9]*
///   jets         u_x, u_xx, u_txx, u_x^(k)   (dependents declared in ctx)
///   functions    f(u), f'(u), f''(u), f[1,0](t,u)
///   integrals    int(expr, dummy, lo, hi)
///   derivative   D(expr, var)  -- expands to the total derivative at parse time
///   operators    + - * / ^   with ^ right-associative and binding tightest
Expr parse(const std::string& text, const Context& ctx);

struct ParsedEquation {
    Expr lhs;
    Expr rhs;
    Expr residual() const { return simplify(lhs - rhs); }
};

/// Parses "lhs = rhs".
ParsedEquation parse_equation(const std::string& text, const Context& ctx);

} // namespace mises

#endif

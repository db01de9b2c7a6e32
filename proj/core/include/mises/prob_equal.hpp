#ifndef MISES_PROB_EQUAL_HPP
#define MISES_PROB_EQUAL_HPP

#include <cstdint>
#include <random>

#include "mises/eval.hpp"
#include "mises/expr.hpp"

namespace mises {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Probabilistic identity testing: expressions are compared by evaluation at
/// random points, with every opaque function instantiated per trial as a
/// random integer-coefficient polynomial whose formal derivatives are exact.
struct ProbEqualOptions {
    int trials = 12;
    double tol = 1e-9;
    std::uint64_t seed = kDefaultSeed;
    double point_lo = 0.3; // sampling window avoids singularities of eta^-1 etc.
    double point_hi = 1.7;
    int poly_degree = 3;   // degree 3 separates f, f', f''
    int coeff_lo = -5;
    int coeff_hi = 5;
};

/// Random polynomial of the given arity with total degree poly_degree, integer
/// coefficients, and a nonzero leading part.
Polynomial random_polynomial(int arity, std::mt19937_64& rng, const ProbEqualOptions& opts);

/// Random environment covering every free symbol and opaque function of the
/// given expressions.
EvalEnv random_env(const std::vector<Expr>& exprs, std::mt19937_64& rng,
                   const ProbEqualOptions& opts);

/// True iff |a - b| <= tol * (1 + |a| + |b|) at `trials` random points.
/// Evaluation errors trigger a retry at a fresh point; more than 10 * trials
/// retries aborts with EvalError.
bool equal_probabilistic(const Expr& a, const Expr& b, const ProbEqualOptions& opts = {});

} // namespace mises

#endif

#include "mises/prob_equal.hpp"

#include <cmath>

namespace mises {

namespace {

void monomials_up_to(int arity, int degree, std::vector<int>& cur, int from, int left,
                     std::vector<std::vector<int>>& out) {
    if (from == arity) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        cur[from] = k;
        monomials_up_to(arity, degree, cur, from + 1, left - k, out);
    }
    cur[from] = 0;
}

} // namespace

Polynomial random_polynomial(int arity, std::mt19937_64& rng, const ProbEqualOptions& opts) {
    std::vector<std::vector<int>> expos;
    std::vector<int> cur(arity, 0);
    monomials_up_to(arity, opts.poly_degree, cur, 0, opts.poly_degree, expos);

    std::uniform_int_distribution<int> coeff(opts.coeff_lo, opts.coeff_hi);
    Polynomial p;
    p.arity = arity;
    bool top_nonzero = false;
    for (int attempt = 0; attempt < 64 && !top_nonzero; ++attempt) {
        p.terms.clear();
        for (const auto& e : expos) {
            int c = coeff(rng);
            if (c == 0) continue;
            int total = 0;
            for (int k : e) total += k;
            if (total == opts.poly_degree) top_nonzero = true;
            p.terms.push_back({static_cast<double>(c), e});
        }
    }
    if (!top_nonzero) {
        std::vector<int> lead(arity, 0);
        lead[0] = opts.poly_degree;
        p.terms.push_back({1.0, lead});
    }
    return p;
}

EvalEnv random_env(const std::vector<Expr>& exprs, std::mt19937_64& rng,
                   const ProbEqualOptions& opts) {
    std::set<std::string> syms;
    std::map<std::string, int> funcs;
    for (const auto& e : exprs) {
        collect_free_symbols(e, syms);
        collect_func_arities(e, funcs);
    }
    std::uniform_real_distribution<double> point(opts.point_lo, opts.point_hi);
    EvalEnv env;
    for (const auto& s : syms) env.vars[s] = point(rng);
    for (const auto& [name, arity] : funcs) env.funcs[name] = random_polynomial(arity, rng, opts);
    return env;
}

bool equal_probabilistic(const Expr& a, const Expr& b, const ProbEqualOptions& opts) {
    Expr diff = simplify(a - b);
    if (diff.is_zero()) return true;

    std::mt19937_64 rng(opts.seed);
    int done = 0;
    int retries = 0;
    while (done < opts.trials) {
        EvalEnv env = random_env({a, b}, rng, opts);
        double va, vb, vd;
        try {
            va = eval_numeric(a, env);
            vb = eval_numeric(b, env);
            vd = eval_numeric(diff, env);
        } catch (const EvalError&) {
            if (++retries > 10 * opts.trials)
                throw EvalError("equal_probabilistic: no valid evaluation points found");
            continue;
        }
        if (!(std::abs(vd) <= opts.tol * (1.0 + std::abs(va) + std::abs(vb)))) return false;
        ++done;
    }
    return true;
}

} // namespace mises

#ifndef MISES_TEST_SUPPORT_HPP
#define MISES_TEST_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "mises/expr.hpp"
#include "mises/parser.hpp"

namespace mises::test {

// Random expression generators for the property suites. `raw` variants build
// nodes directly (unsorted, unflattened) to exercise simplify().

struct GenOptions {
    std::vector<std::string> symbols{"x", "y"};
    std::vector<std::pair<std::string, int>> functions{{"f", 1}};
    int max_depth = 4;
    bool allow_negative_powers = true;
    bool allow_fractional_powers = true;
    bool plain_function_args = false; // arguments of opaque functions stay symbols
};

inline Expr raw_node(Kind kind, std::vector<Expr> kids) {
    ExprNode n;
    n.kind = kind;
    n.kids = std::move(kids);
    return Expr::make(std::move(n));
}

inline Expr random_expr(std::mt19937_64& rng, const GenOptions& opts, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, 99);
    std::uniform_int_distribution<int> small(-4, 4);
    auto symbol_of = [&]() {
        std::uniform_int_distribution<size_t> s(0, opts.symbols.size() - 1);
        return symbol(opts.symbols[s(rng)]);
    };
    if (depth >= opts.max_depth) {
        return pick(rng) < 60 ? symbol_of() : rational(small(rng));
    }
    int roll = pick(rng);
    if (roll < 20) return symbol_of();
    if (roll < 30) return rational(small(rng));
    if (roll < 55) {
        std::vector<Expr> kids;
        int k = 2 + pick(rng) % 2;
        for (int i = 0; i < k; ++i) kids.push_back(random_expr(rng, opts, depth + 1));
        return sum(std::move(kids));
    }
    if (roll < 80) {
        std::vector<Expr> kids;
        int k = 2 + pick(rng) % 2;
        for (int i = 0; i < k; ++i) kids.push_back(random_expr(rng, opts, depth + 1));
        return product(std::move(kids));
    }
    if (roll < 92) {
        std::vector<Rational> pool{Rational(2), Rational(3)};
        if (opts.allow_negative_powers) {
            pool.push_back(Rational(-1));
            pool.push_back(Rational(-2));
        }
        if (opts.allow_fractional_powers) pool.push_back(Rational(1, 2));
        std::uniform_int_distribution<size_t> p(0, pool.size() - 1);
        Rational exp = pool[p(rng)];
        // fractional powers need a guaranteed-positive base: plain symbols only
        Expr base =
            exp.is_integer() ? random_expr(rng, opts, depth + 1) : symbol_of();
        return power(base, rational(exp));
    }
    if (!opts.functions.empty()) {
        std::uniform_int_distribution<size_t> fsel(0, opts.functions.size() - 1);
        auto [name, arity] = opts.functions[fsel(rng)];
        std::vector<Expr> args;
        for (int i = 0; i < arity; ++i)
            args.push_back(opts.plain_function_args ? symbol_of()
                                                    : random_expr(rng, opts, depth + 1));
        return funcapp(name, std::move(args));
    }
    return symbol_of();
}

// Non-canonical tree: raw sums/products with shuffled duplicated children.
inline Expr random_raw_expr(std::mt19937_64& rng, const GenOptions& opts, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, 99);
    if (depth >= 3) return random_expr(rng, opts, opts.max_depth - 1);
    int roll = pick(rng);
    if (roll < 40) {
        std::vector<Expr> kids;
        int k = 2 + pick(rng) % 3;
        for (int i = 0; i < k; ++i) kids.push_back(random_raw_expr(rng, opts, depth + 1));
        if (pick(rng) < 30) kids.push_back(kids.front()); // a duplicate to collect
        return raw_node(pick(rng) < 50 ? Kind::Sum : Kind::Product, std::move(kids));
    }
    if (roll < 55) {
        Expr base = random_raw_expr(rng, opts, depth + 1);
        return raw_node(Kind::Power, {base, rational(pick(rng) % 3)});
    }
    return random_expr(rng, opts, depth + 1);
}

// Random jet expression over u(t, x) up to second order, polynomial in jets.
inline Expr random_jet_expr(std::mt19937_64& rng, int terms = 3) {
    std::vector<std::string> jets{"u", "u_t", "u_x", "u_tx", "u_xx"};
    std::uniform_int_distribution<int> pick(0, 99);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<size_t> jsel(0, jets.size() - 1);
    std::vector<Expr> out;
    for (int i = 0; i < terms; ++i) {
        std::vector<Expr> fs;
        int c = coeff(rng);
        fs.push_back(rational(c == 0 ? 1 : c));
        int nf = 1 + pick(rng) % 2;
        for (int j = 0; j < nf; ++j) {
            Expr jet = symbol(jets[jsel(rng)]);
            fs.push_back(pick(rng) < 25 ? power(jet, rational(2)) : jet);
        }
        if (pick(rng) < 30) fs.push_back(funcapp("f", {symbol("u")}));
        if (pick(rng) < 20) fs.push_back(symbol(pick(rng) < 50 ? "t" : "x"));
        out.push_back(product(std::move(fs)));
    }
    return sum(std::move(out));
}

} // namespace mises::test

#endif

#include "mises/jet.hpp"

#include "mises/equations.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mises {

int JetContext::direction_index(const std::string& dir) const {
    for (size_t i = 0; i < independents.size(); ++i)
        if (independents[i] == dir) return static_cast<int>(i);
    throw std::invalid_argument("direction " + dir + " is not an independent variable of " + dependent);
}

std::string jet_name(const std::string& dependent, const std::vector<std::string>& independents,
                     const std::vector<int>& counts) {
    std::string name = dependent;
    bool any = false;
    for (int c : counts) any = any || c > 0;
    if (!any) return name;
    name += '_';
    for (size_t i = 0; i < independents.size(); ++i)
        for (int k = 0; k < counts[i]; ++k) name += independents[i];
    return name;
}

Expr jet_symbol(const JetContext& ctx, const std::vector<int>& counts) {
    return symbol(jet_name(ctx.dependent, ctx.independents, counts));
}

std::optional<std::vector<int>> match_jet(const std::string& name, const std::string& dependent,
                                          const std::vector<std::string>& independents) {
    std::vector<int> counts(independents.size(), 0);
    if (name == dependent) return counts;
    if (name.size() <= dependent.size() + 1) return std::nullopt;
    if (name.compare(0, dependent.size(), dependent) != 0) return std::nullopt;
    if (name[dependent.size()] != '_') return std::nullopt;
    std::string suffix = name.substr(dependent.size() + 1);

    // match direction names greedily, longest first, in canonical order
    std::vector<size_t> order(independents.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return independents[a].size() > independents[b].size();
    });

    size_t pos = 0;
    int last_dir = -1;
    while (pos < suffix.size()) {
        bool matched = false;
        for (size_t oi : order) {
            const std::string& d = independents[oi];
            if (suffix.compare(pos, d.size(), d) == 0) {
                int dir = static_cast<int>(oi);
                if (dir < last_dir) return std::nullopt; // non-canonical order
                counts[dir] += 1;
                last_dir = dir;
                pos += d.size();
                matched = true;
                break;
            }
        }
        if (!matched) return std::nullopt;
    }
    return counts;
}

Expr total_derivative_multi(const Expr& e, const std::string& dir,
                            const std::vector<JetContext>& ctxs,
                            std::vector<std::string>* warnings) {
    std::vector<Expr> terms;
    // explicit dependence on the independent variable itself
    terms.push_back(differentiate(e, dir));

    for (const auto& ctx : ctxs) {
        bool member = false;
        for (const auto& v : ctx.independents) member = member || v == dir;
        if (!member) continue; // this dependent does not vary with dir
        int di = ctx.direction_index(dir);
        for (const auto& name : free_symbols(e)) {
            auto counts = match_jet(name, ctx.dependent, ctx.independents);
            if (!counts) continue;
            Expr coeff = differentiate(e, name);
            if (coeff.is_zero()) continue;
            auto promoted = *counts;
            promoted[di] += 1;
            int order = std::accumulate(promoted.begin(), promoted.end(), 0);
            if (order > ctx.max_order && warnings)
                warnings->push_back("jet order " + std::to_string(order) + " of " + ctx.dependent +
                                    " exceeds the declared maximum " + std::to_string(ctx.max_order));
            terms.push_back(product({coeff, symbol(jet_name(ctx.dependent, ctx.independents, promoted))}));
        }
    }
    return sum(std::move(terms));
}

Expr total_derivative(const Expr& e, const std::string& dir, const JetContext& ctx,
                      std::vector<std::string>* warnings) {
    return total_derivative_multi(e, dir, {ctx}, warnings);
}

Expr mises_prolong(int k, const JetContext& eta_ctx, const std::string& u_name) {
    if (k < 1) throw std::invalid_argument("mises_prolong requires k >= 1");
    Expr eta = symbol(eta_ctx.dependent);
    Expr acc = eta;
    for (int i = 2; i <= k; ++i)
        acc = expand_products(product({eta, total_derivative(acc, u_name, eta_ctx)}));
    return acc;
}

Expr to_mises(const Expr& e, const JetContext& u_ctx, const JetContext& eta_ctx) {
    if (u_ctx.mises_direction.empty())
        throw MisesError("jet context of " + u_ctx.dependent + " has no Mises direction");
    int mi = u_ctx.direction_index(u_ctx.mises_direction);

    std::map<std::string, Expr> map;
    for (const auto& name : free_symbols(e)) {
        auto counts = match_jet(name, u_ctx.dependent, u_ctx.independents);
        if (!counts) continue;
        int total = std::accumulate(counts->begin(), counts->end(), 0);
        if (total == 0) continue; // the bare unknown becomes an independent variable
        if ((*counts)[mi] != total)
            throw MisesError("jet " + name + " has no pointwise von Mises image");
        map.emplace(name, mises_prolong(total, eta_ctx, u_ctx.dependent));
    }
    return expand_products(substitute(e, map));
}

int max_jet_order(const Expr& e, const JetContext& ctx) {
    int best = 0;
    for (const auto& name : free_symbols(e)) {
        auto counts = match_jet(name, ctx.dependent, ctx.independents);
        if (!counts) continue;
        best = std::max(best, std::accumulate(counts->begin(), counts->end(), 0));
    }
    return best;
}

} // namespace mises

#include "mises/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>

#include <nlohmann/json.hpp>

namespace mises {

using nlohmann::json;

Context CatalogEntry::context() const {
    Context ctx;
    for (const auto& s : symbols) ctx.symbol(s);
    for (const auto& [n, a] : functions) ctx.function(n, a);
    for (const auto& [n, v] : dependents) ctx.dependent(n, v);
    return ctx;
}

bool CatalogEntry::has_tag(const std::string& t) const {
    return std::find(tags.begin(), tags.end(), t) != tags.end();
}

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file " + path);
    json j = json::parse(in);

    Catalog cat;
    cat.version_ = j.value("version", "0");
    if (j.contains("rules"))
        for (auto& [k, v] : j["rules"].items()) cat.rule_refs_[k] = v.get<std::string>();

    for (const auto& je : j.at("entries")) {
        CatalogEntry e;
        e.id = je.at("id").get<std::string>();
        e.section = je.value("section", "");
        if (je.contains("cite")) {
            e.cite.ref = je["cite"].value("ref", "");
            e.cite.anchor = je["cite"].value("anchor", "");
        }
        if (je.contains("tags"))
            for (const auto& t : je["tags"]) e.tags.push_back(t.get<std::string>());
        if (je.contains("context")) {
            const auto& jc = je["context"];
            if (jc.contains("symbols"))
                for (const auto& s : jc["symbols"]) e.symbols.push_back(s.get<std::string>());
            if (jc.contains("functions"))
                for (auto& [k, v] : jc["functions"].items()) e.functions[k] = v.get<int>();
            if (jc.contains("dependents"))
                for (auto& [k, v] : jc["dependents"].items()) {
                    std::vector<std::string> vars;
                    for (const auto& s : v) vars.push_back(s.get<std::string>());
                    e.dependents.emplace_back(k, std::move(vars));
                }
        }
        e.input = je.at("input").get<std::string>();
        for (const auto& js : je.at("recipe")) {
            RecipeStep step;
            step.op = js.at("op").get<std::string>();
            if (js.contains("params"))
                for (auto& [k, v] : js["params"].items()) step.params[k] = v.get<std::string>();
            e.recipe.push_back(std::move(step));
        }
        e.expected = je.at("expected").get<std::string>();
        if (je.contains("intermediate")) e.intermediate = je["intermediate"].get<std::string>();
        e.notes = je.value("notes", "");
        if (je.contains("variants"))
            for (const auto& jv : je["variants"]) {
                Variant v;
                v.label = jv.value("label", "");
                if (jv.contains("bind"))
                    for (auto& [k, val] : jv["bind"].items()) v.bind[k] = val.get<std::string>();
                if (jv.contains("bind_fn"))
                    for (auto& [k, val] : jv["bind_fn"].items()) {
                        FnBinding fb;
                        for (const auto& p : val.at("params")) fb.params.push_back(p.get<std::string>());
                        fb.body = val.at("body").get<std::string>();
                        v.bind_fn[k] = std::move(fb);
                    }
                if (jv.contains("expected")) v.expected = jv["expected"].get<std::string>();
                e.variants.push_back(std::move(v));
            }
        cat.entries_.push_back(std::move(e));
    }
    std::sort(cat.entries_.begin(), cat.entries_.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
    return cat;
}

Catalog Catalog::load_default() {
    if (const char* env = std::getenv("MISES_CATALOG")) return load(env);
#ifdef MISES_CATALOG_PATH
    return load(MISES_CATALOG_PATH);
#else
    return load("data/catalog.json");
#endif
}

const CatalogEntry* Catalog::find(const std::string& id) const {
    for (const auto& e : entries_)
        if (e.id == id) return &e;
    return nullptr;
}

std::vector<const CatalogEntry*> Catalog::list(const std::string& section,
                                               const std::string& tag) const {
    std::vector<const CatalogEntry*> out;
    for (const auto& e : entries_) {
        if (!section.empty() && e.section != section) continue;
        if (!tag.empty() && !e.has_tag(tag)) continue;
        out.push_back(&e);
    }
    return out;
}

std::string Catalog::rule_ref(const std::string& rule_id) const {
    auto it = rule_refs_.find(rule_id);
    return it == rule_refs_.end() ? "" : it->second;
}

std::uint64_t entry_seed(std::uint64_t master, const std::string& id) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return master ^ h;
}

namespace {

struct RecipeState {
    std::optional<MisesEquation> meq;
    std::optional<IntegroDiffEquation> ide;
    std::optional<BacklundPair> pair;
    std::optional<VerifyResult> verify;
    bool intermediate_checked = false;
};

JetContext entry_u_context(const Context& ctx, const RecipeStep& step, const std::string& fallback,
                           const std::string& default_dir) {
    std::string dep = fallback;
    auto it = step.params.find("dep");
    if (it != step.params.end()) dep = it->second;
    const auto* indeps = ctx.independents_of(dep);
    if (indeps == nullptr) throw MatchError("unknown jet dependent " + dep);
    std::string dir = default_dir;
    auto jt = step.params.find("dir");
    if (jt != step.params.end()) dir = jt->second;
    return JetContext{*indeps, dep, 10, dir};
}

SubstitutionSpec parse_substitution_spec(const RecipeStep& step, const Context& ctx) {
    SubstitutionSpec spec;
    spec.new_dep = step.params.at("new_dep");
    auto split_list = [](const std::string& s) {
        std::vector<std::string> parts;
        size_t start = 0;
        while (start <= s.size()) {
            size_t sep = s.find(';', start);
            if (sep == std::string::npos) {
                parts.push_back(s.substr(start));
                break;
            }
            parts.push_back(s.substr(start, sep - start));
            start = sep + 1;
        }
        return parts;
    };
    for (auto& item : split_list(step.params.at("vars"))) {
        auto eqp = item.find('=');
        if (eqp == std::string::npos) throw MatchError("malformed substitution variable: " + item);
        std::string name = item.substr(0, eqp);
        name.erase(remove_if(name.begin(), name.end(), ::isspace), name.end());
        spec.new_vars.emplace_back(name, parse(item.substr(eqp + 1), ctx));
    }
    auto side = step.params.find("side");
    if (side != step.params.end() && !side->second.empty())
        for (auto& item : split_list(side->second)) {
            ParsedEquation rel = parse_equation(item, ctx);
            spec.side_relations.emplace_back(rel.lhs, rel.rhs);
        }
    return spec;
}

ParsedEquation bind_equation(ParsedEquation eq, const Context& ctx, const Variant& v) {
    std::map<std::string, Expr> binds;
    for (const auto& [name, text] : v.bind) binds[name] = parse(text, ctx);
    if (!binds.empty()) {
        eq.lhs = substitute(eq.lhs, binds);
        eq.rhs = substitute(eq.rhs, binds);
    }
    for (const auto& [name, fb] : v.bind_fn) {
        Context inner = ctx;
        for (const auto& p : fb.params) inner.symbol(p);
        Expr body = parse(fb.body, inner);
        eq.lhs = substitute_funcapp(eq.lhs, name, fb.params, body);
        eq.rhs = substitute_funcapp(eq.rhs, name, fb.params, body);
    }
    return eq;
}

CheckResult run_case(const Catalog& cat, const CatalogEntry& entry, const Context& ctx,
                     const Variant* variant, const RunOptions& opts, EntryResult& out) {
    CheckResult check;
    check.label = variant ? (variant->label.empty() ? "variant" : variant->label) : "main";

    ProbEqualOptions prob = opts.prob;
    prob.seed = entry_seed(opts.prob.seed, entry.id + "/" + check.label);

    ParsedEquation input = parse_equation(entry.input, ctx);
    if (variant) input = bind_equation(input, ctx, *variant);

    std::string expected_text = entry.expected;
    if (variant && variant->expected) expected_text = *variant->expected;
    ParsedEquation expected = parse_equation(expected_text, ctx);
    if (variant && !variant->expected) expected = bind_equation(expected, ctx, *variant);
    if (opts.corrupt_expected) expected.rhs = simplify(-expected.rhs);

    RecipeState st;
    auto check_intermediate = [&]() -> bool {
        if (!entry.intermediate || st.intermediate_checked || !st.meq) return true;
        st.intermediate_checked = true;
        ParsedEquation inter = parse_equation(*entry.intermediate, ctx);
        if (variant) inter = bind_equation(inter, ctx, *variant);
        if (!equations_equal(*st.meq, inter, prob)) {
            check.message = "intermediate equation mismatch: engine produced " + st.meq->str();
            return false;
        }
        return true;
    };

    for (const auto& step : entry.recipe) {
        if (step.op == "reduce_mises_2_1") {
            auto ble = match_boundary_layer(input, entry_u_context(ctx, step, "u", "x"));
            ble.G.reset();
            st.meq = reduce_mises_2_1(ble);
        } else if (step.op == "reduce_mises_2_5") {
            auto uc = entry_u_context(ctx, step, "u", "x");
            auto ble = match_boundary_layer(input, uc);
            auto g = step.params.find("G");
            if (g != step.params.end()) ble.G = parse(g->second, ctx);
            st.meq = reduce_mises_2_5(ble);
        } else if (step.op == "rf_pair") {
            auto ev = match_evolution(input, entry_u_context(ctx, step, "u", "x"));
            auto res = rf_pair_evolution(ev);
            st.meq = res.equation;
            st.pair = res.pair;
        } else if (step.op == "rf_pair_integro") {
            std::string dummy = "z";
            auto d = step.params.find("dummy");
            if (d != step.params.end()) dummy = d->second;
            IntegroDiffEquation ide =
                st.ide ? *st.ide
                       : match_integro_diff(input, entry_u_context(ctx, step, "u", "x"), dummy);
            auto res = rf_pair_integrodiff(ide);
            st.meq = res.equation;
            st.pair = res.pair;
        } else if (step.op == "mixed_to_integro") {
            auto wc = entry_u_context(ctx, step, "w", "x");
            auto [a, f] = match_mixed_derivative(input, wc);
            st.ide = rewrite_mixed_to_integro(a, f, wc);
        } else if (step.op == "mises_3var") {
            auto tv = match_three_var(input, entry_u_context(ctx, step, "u", "y"));
            st.meq = reduce_mises_3var(tv);
        } else if (step.op == "ode_reduce") {
            auto ode = match_ode(input, entry_u_context(ctx, step, "u", "x"));
            st.meq = reduce_ode_autonomous(ode);
        } else if (step.op == "ode_rf_pair") {
            auto ode = match_ode(input, entry_u_context(ctx, step, "u", "x"));
            auto res = rf_pair_ode(ode);
            st.meq = res.equation;
            st.pair = res.pair;
        } else if (step.op == "change_dependent") {
            if (!st.meq) throw MatchError("change_dependent needs a reduced equation first");
            if (!check_intermediate()) return check;
            st.meq = change_dependent(*st.meq, ChangeRule::parse(step.params.at("rule")));
        } else if (step.op == "verify_substitution") {
            auto uc = entry_u_context(ctx, step, "zeta", "x");
            MisesEquation eq;
            if (st.meq) {
                eq = *st.meq;
            } else {
                eq.dep = uc.dependent;
                eq.independents = uc.independents;
                eq.lhs = input.lhs;
                eq.rhs = input.rhs;
            }
            st.verify = verify_substitution(eq, parse_substitution_spec(step, ctx), expected, prob);
            st.meq.reset();
        } else {
            throw MatchError("unknown recipe op " + step.op);
        }
    }

    if (!check_intermediate()) return check;

    if (st.verify) {
        check.pass = st.verify->ok;
        if (!check.pass) check.message = st.verify->detail;
    } else if (st.meq) {
        check.pass = equations_equal(*st.meq, expected, prob);
        if (!check.pass)
            check.message = "engine produced " + st.meq->str() + ", expected " + expected_text;
        if (!variant) {
            for (const auto& s : st.meq->log.steps)
                out.log.push_back({s.rule, cat.rule_ref(s.rule)});
            for (const auto& w : st.meq->log.warnings) out.extras.push_back("warning: " + w);
        }
    } else {
        check.message = "recipe produced no equation";
    }
    if (st.pair && !variant) {
        out.extras.push_back("pair: " + to_string(st.pair->rel1_lhs) + " = " +
                             to_string(st.pair->rel1_rhs) + ";  " + to_string(st.pair->rel2_lhs) +
                             " = " + to_string(st.pair->rel2_rhs));
    }
    return check;
}

} // namespace

EntryResult run_entry(const Catalog& cat, const CatalogEntry& entry, const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    EntryResult out;
    out.id = entry.id;
    out.cite = entry.cite;

    Context ctx = entry.context();
    try {
        out.checks.push_back(run_case(cat, entry, ctx, nullptr, opts, out));
        for (const auto& v : entry.variants)
            out.checks.push_back(run_case(cat, entry, ctx, &v, opts, out));
        out.pass = std::all_of(out.checks.begin(), out.checks.end(),
                               [](const CheckResult& c) { return c.pass; });
        if (!out.pass)
            for (const auto& c : out.checks)
                if (!c.pass) {
                    out.message = "[" + c.label + "] " + c.message;
                    break;
                }
    } catch (const std::exception& ex) {
        out.pass = false;
        out.message = std::string("error: ") + ex.what();
    }
    out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

AggregateResult run_all(const Catalog& cat, const RunOptions& opts, int parallelism) {
    AggregateResult agg;
    agg.seed = opts.prob.seed;
    const auto& entries = cat.entries();
    agg.entries.resize(entries.size());

    if (parallelism <= 1) {
        for (size_t i = 0; i < entries.size(); ++i)
            agg.entries[i] = run_entry(cat, entries[i], opts);
    } else {
        std::vector<std::future<EntryResult>> futures;
        futures.reserve(entries.size());
        for (const auto& e : entries)
            futures.push_back(std::async(std::launch::async, [&cat, &e, &opts] {
                return run_entry(cat, e, opts);
            }));
        for (size_t i = 0; i < futures.size(); ++i) agg.entries[i] = futures[i].get();
    }
    for (const auto& r : agg.entries) (r.pass ? agg.passed : agg.failed) += 1;
    return agg;
}

} // namespace mises

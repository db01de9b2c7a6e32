#ifndef MISES_CATALOG_HPP
#define MISES_CATALOG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mises/equations.hpp"
#include "mises/prob_equal.hpp"
#include "mises/transform.hpp"

namespace mises {

struct Citation {
    std::string ref;    // source location of the worked example
    std::string anchor; // short verbatim quote locating it
};

struct RecipeStep {
    std::string op;
    std::map<std::string, std::string> params;
};

struct FnBinding {
    std::vector<std::string> params;
    std::string body;
};

/// A specialization of an entry: symbols bound to concrete values and/or
/// opaque functions bound to closed forms, run against the same (or an
/// overridden) expected equation.
struct Variant {
    std::string label;
    std::map<std::string, std::string> bind;
    std::map<std::string, FnBinding> bind_fn;
    std::optional<std::string> expected;
};

struct CatalogEntry {
    std::string id;
    std::string section;
    Citation cite;
    std::vector<std::string> tags;
    std::vector<std::string> symbols;
    std::map<std::string, int> functions;
    std::vector<std::pair<std::string, std::vector<std::string>>> dependents;
    std::string input;
    std::vector<RecipeStep> recipe;
    std::string expected;
    std::optional<std::string> intermediate;
    std::string notes;
    std::vector<Variant> variants;

    Context context() const;
    bool has_tag(const std::string& t) const;
};

class Catalog {
public:
    static Catalog load(const std::string& path);
    static Catalog load_default();

    const std::vector<CatalogEntry>& entries() const { return entries_; }
    const CatalogEntry* find(const std::string& id) const;
    std::vector<const CatalogEntry*> list(const std::string& section = "",
                                          const std::string& tag = "") const;
    std::string rule_ref(const std::string& rule_id) const;
    const std::string& version() const { return version_; }

private:
    std::string version_;
    std::map<std::string, std::string> rule_refs_;
    std::vector<CatalogEntry> entries_; // sorted by id
};

struct RunOptions {
    ProbEqualOptions prob;
    bool corrupt_expected = false; // negative control: flips the expected right side
};

struct CheckResult {
    std::string label;
    bool pass = false;
    std::string message;
};

struct EntryResult {
    std::string id;
    Citation cite;
    bool pass = false;
    std::string message;
    std::vector<CheckResult> checks;
    std::vector<LogStep> log;
    std::vector<std::string> extras; // e.g. the Backlund pair relations
    double millis = 0.0;
};

EntryResult run_entry(const Catalog& cat, const CatalogEntry& entry, const RunOptions& opts);

struct AggregateResult {
    std::vector<EntryResult> entries;
    int passed = 0;
    int failed = 0;
    std::uint64_t seed = kDefaultSeed;
    bool all_passed() const { return failed == 0; }
};

AggregateResult run_all(const Catalog& cat, const RunOptions& opts, int parallelism = 1);

/// Deterministic per-entry seed derived from the master seed and the id.
std::uint64_t entry_seed(std::uint64_t master, const std::string& id);

} // namespace mises

#endif

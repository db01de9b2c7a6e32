#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mises/catalog.hpp"
#include "mises/report.hpp"

using namespace mises;

namespace {

const Catalog& catalog() {
    static Catalog cat = Catalog::load_default();
    return cat;
}

TEST(CatalogData, SixteenEntries) {
    const auto& entries = catalog().entries();
    ASSERT_EQ(entries.size(), 16u);
    for (const char* id : {"burgers-4.1", "kdv-4.5", "prandtl-7.5"})
        EXPECT_NE(catalog().find(id), nullptr) << id;
    // stable id order
    for (size_t i = 1; i < entries.size(); ++i) EXPECT_LT(entries[i - 1].id, entries[i].id);
}

TEST(CatalogData, SectionAndTagFilters) {
    EXPECT_EQ(catalog().list("4").size(), 7u);
    auto lin = catalog().list("", "linearizes");
    ASSERT_EQ(lin.size(), 4u);
    std::set<std::string> ids;
    for (const auto* e : lin) ids.insert(e->id);
    EXPECT_TRUE(ids.count("sec2-ex1"));
    EXPECT_TRUE(ids.count("sec2-ex2"));
    EXPECT_TRUE(ids.count("integro-5.4"));
    EXPECT_TRUE(ids.count("calogero-6.3"));
}

TEST(CatalogData, EveryEntryCarriesCitation) {
    for (const auto& e : catalog().entries()) {
        EXPECT_FALSE(e.cite.ref.empty()) << e.id;
        EXPECT_FALSE(e.cite.anchor.empty()) << e.id;
        EXPECT_FALSE(e.input.empty()) << e.id;
        EXPECT_FALSE(e.expected.empty()) << e.id;
        EXPECT_FALSE(e.recipe.empty()) << e.id;
    }
}

TEST(CatalogRun, AllEntriesPass) {
    RunOptions opts;
    auto agg = run_all(catalog(), opts, 1);
    for (const auto& r : agg.entries) EXPECT_TRUE(r.pass) << r.id << ": " << r.message;
    EXPECT_EQ(agg.passed, 16);
    EXPECT_EQ(agg.failed, 0);
}

TEST(CatalogRun, SingleEntry) {
    const CatalogEntry* e = catalog().find("burgers-4.1");
    ASSERT_NE(e, nullptr);
    RunOptions opts;
    EntryResult r = run_entry(catalog(), *e, opts);
    EXPECT_TRUE(r.pass) << r.message;
    EXPECT_FALSE(r.log.empty());
    EXPECT_FALSE(r.extras.empty()); // the pair relation is reported
}

TEST(CatalogRun, NegativeControlsAllFail) {
    RunOptions opts;
    opts.corrupt_expected = true;
    auto agg = run_all(catalog(), opts, 1);
    for (const auto& r : agg.entries) EXPECT_FALSE(r.pass) << r.id;
    EXPECT_EQ(agg.passed, 0);
}

TEST(CatalogRun, DeterministicAcrossParallelism) {
    RunOptions opts;
    auto serial = run_all(catalog(), opts, 1);
    auto parallel = run_all(catalog(), opts, 4);
    ASSERT_EQ(serial.entries.size(), parallel.entries.size());
    for (size_t i = 0; i < serial.entries.size(); ++i) {
        EXPECT_EQ(serial.entries[i].id, parallel.entries[i].id);
        EXPECT_EQ(serial.entries[i].pass, parallel.entries[i].pass);
        EXPECT_EQ(serial.entries[i].message, parallel.entries[i].message);
    }
}

TEST(CatalogRun, EmptyCatalogSucceeds) {
    std::string path = testing::TempDir() + "/empty_catalog.json";
    {
        std::ofstream out(path);
        out << R"({"version": "1", "entries": []})";
    }
    Catalog empty = Catalog::load(path);
    RunOptions opts;
    auto agg = run_all(empty, opts, 1);
    EXPECT_EQ(agg.passed, 0);
    EXPECT_EQ(agg.failed, 0);
    EXPECT_TRUE(agg.all_passed());
}

TEST(CatalogRun, EntrySeedIsStable) {
    EXPECT_EQ(entry_seed(42, "burgers-4.1"), entry_seed(42, "burgers-4.1"));
    EXPECT_NE(entry_seed(42, "burgers-4.1"), entry_seed(42, "kdv-4.5"));
}

TEST(CatalogReport, ByteIdenticalForIdenticalConfig) {
    RunOptions opts;
    opts.prob.seed = 7;
    auto a = aggregate_to_json("catalog run", run_all(catalog(), opts, 1));
    auto b = aggregate_to_json("catalog run", run_all(catalog(), opts, 4));
    EXPECT_EQ(a.dump(2), b.dump(2));
    EXPECT_EQ(a["seed"], 7);
    EXPECT_EQ(a["timing"], 0.0); // wall time never enters the serialized report
}

// side-by-side table of the expected equations and their citation anchors
TEST(CatalogDoc, SideBySideTable) {
    std::ostringstream table;
    table << "| id | expected | source |\n|---|---|---|\n";
    int rows = 0;
    for (const auto& e : catalog().entries()) {
        table << "| " << e.id << " | `" << e.expected << "` | " << e.cite.ref << " ("
              << e.cite.anchor << ") |\n";
        ++rows;
    }
    EXPECT_EQ(rows, 16);
    std::string path = testing::TempDir() + "/catalog_table.md";
    std::ofstream(path) << table.str();
    std::ifstream back(path);
    std::stringstream round;
    round << back.rdbuf();
    EXPECT_EQ(round.str(), table.str());
}

} // namespace

#include "mises/report.hpp"

#include <fstream>

namespace mises {

using nlohmann::json;

json report_header(const std::string& command, std::uint64_t seed) {
    json j;
    j["version"] = "1";
    j["command"] = command;
    j["seed"] = seed;
    j["entries"] = json::array();
    j["timing"] = 0.0;
    return j;
}

json entry_to_json(const EntryResult& r) {
    json e;
    e["id"] = r.id;
    e["cite"] = {{"ref", r.cite.ref}, {"anchor", r.cite.anchor}};
    e["status"] = r.pass ? "pass" : "fail";
    if (!r.message.empty()) e["message"] = r.message;
    json checks = json::array();
    for (const auto& c : r.checks) {
        json jc;
        jc["label"] = c.label;
        jc["status"] = c.pass ? "pass" : "fail";
        if (!c.message.empty()) jc["message"] = c.message;
        checks.push_back(jc);
    }
    e["checks"] = checks;
    json log = json::array();
    for (const auto& s : r.log) log.push_back({{"rule", s.rule}, {"cite", s.detail}});
    e["log"] = log;
    if (!r.extras.empty()) e["extras"] = r.extras;
    return e;
}

json aggregate_to_json(const std::string& command, const AggregateResult& agg) {
    json j = report_header(command, agg.seed);
    for (const auto& r : agg.entries) j["entries"].push_back(entry_to_json(r));
    j["passed"] = agg.passed;
    j["failed"] = agg.failed;
    return j;
}

json verification_to_json(const VerificationReport& rep) {
    json e;
    e["id"] = rep.id;
    e["status"] = rep.pass ? "pass" : "fail";
    e["residuals"] = {{"max", rep.max_residual}, {"l2", rep.l2_residual}};
    e["tolerance"] = rep.tolerance;
    if (rep.convergence_order) e["convergence_order"] = *rep.convergence_order;
    if (!rep.notes.empty()) e["notes"] = rep.notes;
    return e;
}

json shift_to_json(const ShiftCheck& c) {
    json e;
    e["id"] = c.id;
    e["status"] = c.pass ? "pass" : "fail";
    e["residuals"] = {{"baseline", c.baseline}, {"shifted", c.shifted}};
    e["expect_invariant"] = c.expect_invariant;
    return e;
}

void write_report(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open report path " + path);
    out << j.dump(2) << '\n';
}

} // namespace mises

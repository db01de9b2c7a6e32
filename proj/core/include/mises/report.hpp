#ifndef MISES_REPORT_HPP
#define MISES_REPORT_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "mises/catalog.hpp"
#include "mises/numeric.hpp"

namespace mises {

// JSON report contract: {version, command, seed, entries:[{id, cite, status,
// residuals?, log:[{rule, cite}]}], timing}. The timing field is pinned to 0
// in serialized reports so identical configurations produce byte-identical
// files; wall-clock times go to the console instead.

nlohmann::json report_header(const std::string& command, std::uint64_t seed);

nlohmann::json entry_to_json(const EntryResult& r);
nlohmann::json aggregate_to_json(const std::string& command, const AggregateResult& agg);
nlohmann::json verification_to_json(const VerificationReport& rep);
nlohmann::json shift_to_json(const ShiftCheck& c);

void write_report(const std::string& path, const nlohmann::json& j);

} // namespace mises

#endif

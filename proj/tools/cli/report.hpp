#pragma once

// JSON serialization of analysis results. Key order is fixed so that
// identical inputs produce byte-identical reports.

#include "json.hpp"

#include "lglab/classifier.hpp"
#include "lglab/lg_analysis.hpp"
#include "lglab/operational.hpp"
#include "lglab/two_slit.hpp"

namespace lglab::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

Json to_json(const Tolerances& tol);
Json to_json(const JointDistribution& joint);
Json to_json(const ArrangementSpec& spec);
Json to_json(const SignTable& table);
Json to_json(const DisturbanceReport& report);
Json to_json(const CompleteOpndResult& result);
Json to_json(const ChainRecord& record);
Json to_json(const StateSpace& space, const Classification& c);
Json to_json(const EquivalenceReport& report);
Json to_json(const DetectionProbabilities& d);
Json to_json(const ViolationMap& map);

/// Envelope shared by every command. `timestamp` empty omits the field.
Json envelope(const std::string& command, const Json& inputs, const Tolerances& tol,
              const std::string& timestamp);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace lglab::cli

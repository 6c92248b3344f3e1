#pragma once

#include <string>

#include <json.hpp>

#include "xoscc/distributions.hpp"
#include "xoscc/family.hpp"
#include "xoscc/infotools.hpp"
#include "xoscc/model.hpp"
#include "xoscc/reduction.hpp"
#include "xoscc/simulator.hpp"

namespace xoscc {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// Every document carries "format" and "version"; readers reject other
// formats and newer versions with InvalidArgument.

Json to_json(const XOSValuation& v);
Json to_json(const Instance& inst);
Json to_json(const GroundTruth& truth);
Json to_json(const IntersectingFamily& family);
Json to_json(const FamilyLadder& ladder);
Json to_json(const Sample& sample);
Json to_json(const Transcript& transcript);
Json to_json(const FamilyReport& report);
Json to_json(const DirectSumReport& report);
Json to_json(const ProductReport& report);
Json to_json(const EmbeddingLawReport& report);
Json to_json(const OutputLawReport& report);

XOSValuation valuation_from_json(const Json& j);
Instance instance_from_json(const Json& j);
GroundTruth truth_from_json(const Json& j);
IntersectingFamily family_from_json(const Json& j);
FamilyLadder ladder_from_json(const Json& j);
Sample sample_from_json(const Json& j);

/// Accepts an instance document or a sample document holding one.
Instance read_instance_document(const Json& j);

Json read_json_file(const std::string& path);
/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace xoscc

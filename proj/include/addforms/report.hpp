#pragma once

// JSON reports. Exact rationals render as {num, den, decimal}; num and den are
// JSON integers when they fit in 64 bits and decimal strings otherwise.

#include "addforms/abelian.hpp"
#include "addforms/bounds.hpp"
#include "addforms/linform.hpp"
#include "addforms/polynomial.hpp"
#include "addforms/rational.hpp"
#include "addforms/reduction.hpp"

#include <json.hpp>

#include <string>

namespace addforms {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "addforms/1";

Json rational_json(const Rational& r);
Json bigint_json(const BigInt& v);
/// {"schema": ..., "command": command}
Json report_header(const std::string& command);
/// Residue tuples of the members: [[r1, r2], ...] or [r, ...] for cyclic groups.
Json subset_json(const GroupSubset& a);
Json element_json(const FiniteAbelianGroup& group, ElementIndex x);
Json tuple_json(const FiniteAbelianGroup& group, std::span<const ElementIndex> g);

Json to_json(const SweepReport& report);
Json to_json(const DeltaClaimsReport& report);
Json to_json(const PinpointReport& report);
Json to_json(const WitnessReport& report, const WitnessSpec& spec, std::size_t max_observations = 100);
Json to_json(const HomDensityReport& report);
Json to_json(const HomDensityBatchReport& report);
Json to_json(const ReductionBundle& bundle);
Json to_json(const PenaltyTransform& t);
Json to_json(const DensityEstimate& e);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

}  // namespace addforms

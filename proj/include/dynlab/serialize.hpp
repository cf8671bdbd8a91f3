#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "dynlab/alt_models.hpp"
#include "dynlab/dynamics.hpp"
#include "dynlab/fixed_points.hpp"
#include "dynlab/interventions.hpp"

namespace dynlab {

using Json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

Json to_json(const GaussianParams& p);
Json to_json(const FixedPointReport& r);
Json to_json(const Trajectory& t);
Json to_json(const Comparison& c);
Json to_json(const DeltaReport& d);
Json to_json(const SubsidyPlan& p);
Json to_json(const OptimalityVerdict& v);
Json to_json(const DpResult& r);
Json to_json(const EquivalenceResult& r);
Json to_json(const ParetoAcceptance& a);

/// Dumps with a fixed layout; non-finite numbers become null.
std::string dump(const Json& j);

std::string trajectory_csv(const Trajectory& t);
std::string cobweb_csv(const std::vector<Segment>& segments);
std::string survey_csv(const SurveyResult& r);
std::string comparison_csv(const Comparison& c);

}  // namespace dynlab

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynlab/gaussian_model.hpp"
#include "dynlab/update_map.hpp"

namespace dynlab {

enum class Stability { attracting, unstable, tangent };

const char* stability_name(Stability s);

struct FixedPoint {
  double z;
  double derivative;
  Stability stability;
};

/// Starting points in [lo, hi] (endpoints included per the closed flags)
/// converge to points[target].
struct Basin {
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
  std::size_t target;
};

struct FixedPointReport {
  std::vector<FixedPoint> points;  // strictly increasing in z
  std::vector<Basin> basins;       // filled by classify_basins
  std::optional<bool> is_contraction;
  std::optional<bool> three_fp_sufficient;
  bool tangent_degenerate = false;
  std::string descriptor;
};

struct FixedPointOptions {
  std::size_t scan_cells = 4096;
  double residual_tol = 1e-12;
  double dedup_tol = 1e-9;
  double tangent_tol = 1e-6;
  double fd_step = 1e-6;
};

/// All fixed points of an increasing map with f(0) >= 0 and f(1) <= 1.
/// Throws DomainError if g = f - id is negative at 0 or positive at 1 and
/// ShapeViolationError if more than three roots turn up.
FixedPointReport find_fixed_points(const UpdateMap& map, const FixedPointOptions& opts = {});

/// Same as above on the model's map, with the two condition flags filled in.
FixedPointReport find_fixed_points(const GaussianParams& params, const FixedPointOptions& opts = {});

/// Fills report.basins from the sign of f - id between consecutive points.
void classify_basins(FixedPointReport& report, const UpdateMap& map);

/// find_fixed_points followed by classify_basins.
FixedPointReport analyze(const GaussianParams& params);

enum class SurveyFilter {
  remark,          // 0 <= tau <= 1 - alpha and K > sqrt(2 pi)/(1 - alpha)
  remark_literal,  // 0 <= tau <= 1 - alpha or K > sqrt(2 pi)/(1 - alpha)
  contraction,     // contraction_check holds
  all,
};

const char* survey_filter_name(SurveyFilter f);
std::optional<SurveyFilter> parse_survey_filter(const std::string& name);

struct SurveyCase {
  GaussianParams params;
  int n_fixed_points;
  double K;
  bool contraction;
};

struct SurveyResult {
  double fraction_three_fp;
  std::size_t n_filtered;
  std::size_t n_three_fp;
  std::vector<SurveyCase> cases;  // filtered tuples in grid order
};

/// Grid values (i + 0.5)/n on each of the five axes; alpha varies slowest.
std::vector<double> survey_axis(std::size_t points_per_axis);

SurveyResult grid_multiplicity_survey(std::size_t points_per_axis, SurveyFilter filter);

}  // namespace dynlab

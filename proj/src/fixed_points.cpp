#include "dynlab/fixed_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynlab/errors.hpp"
#include "dynlab/parallel.hpp"
#include "dynlab/special_functions.hpp"

namespace dynlab {

double central_difference(const std::function<double(double)>& f, double x, double h) {
  double lo = x - h;
  double hi = x + h;
  if (x >= 0.0 && x <= 1.0) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
  }
  return (f(hi) - f(lo)) / (hi - lo);
}

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::unstable: return "unstable";
    case Stability::tangent: return "tangent-degenerate";
  }
  return "unknown";
}

namespace {

// Bisects a strict sign change of g on [a, b] down to adjacent doubles.
double bisect(const std::function<double(double)>& g, double a, double b, double ga) {
  for (int i = 0; i < 2000; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm > 0.0) == (ga > 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return std::abs(g(a)) <= std::abs(g(b)) ? a : b;
}

Stability classify(double d, double tol) {
  if (std::abs(d - 1.0) < tol) return Stability::tangent;
  return d < 1.0 ? Stability::attracting : Stability::unstable;
}

}  // namespace

FixedPointReport find_fixed_points(const UpdateMap& map, const FixedPointOptions& opts) {
  if (!map.eval) throw DomainError("find_fixed_points: map has no evaluator");
  if (opts.scan_cells < 1) throw DomainError("find_fixed_points: scan_cells must be positive");
  auto g = [&map](double x) { return map.eval(x) - x; };

  std::vector<double> nodes;
  nodes.reserve(opts.scan_cells + 1 + map.breakpoints.size());
  for (std::size_t i = 0; i <= opts.scan_cells; ++i) {
    nodes.push_back(static_cast<double>(i) / static_cast<double>(opts.scan_cells));
  }
  for (double b : map.breakpoints) {
    if (b > 0.0 && b < 1.0) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<double> gv(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    gv[i] = g(nodes[i]);
    if (!std::isfinite(gv[i])) throw NumericError("find_fixed_points: map returned a non-finite value");
  }
  if (gv.front() < 0.0) throw DomainError("find_fixed_points: f(0) < 0, map leaves [0, 1]");
  if (gv.back() > 0.0) throw DomainError("find_fixed_points: f(1) > 1, map leaves [0, 1]");

  std::vector<double> roots;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (gv[i] == 0.0) roots.push_back(nodes[i]);
    if (i + 1 < nodes.size() && std::signbit(gv[i]) != std::signbit(gv[i + 1]) && gv[i] != 0.0 && gv[i + 1] != 0.0) {
      const double r = bisect(g, nodes[i], nodes[i + 1], gv[i]);
      if (std::abs(g(r)) > opts.residual_tol) {
        throw NumericError("find_fixed_points: bisection stalled above the residual tolerance (map not continuous?)");
      }
      roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end());

  std::vector<double> unique_roots;
  for (double r : roots) {
    if (unique_roots.empty() || r - unique_roots.back() > opts.dedup_tol) unique_roots.push_back(r);
  }
  if (unique_roots.size() > 3) {
    throw ShapeViolationError("find_fixed_points: more than three fixed points; map is not S-shaped");
  }
  if (unique_roots.empty()) throw NumericError("find_fixed_points: no fixed point located");

  FixedPointReport report;
  report.descriptor = map.descriptor;
  for (double z : unique_roots) {
    const double d = map.has_derivative() ? map.derivative(z) : central_difference(map.eval, z, opts.fd_step);
    report.points.push_back({z, d, classify(d, opts.tangent_tol)});
  }
  if (report.points.size() == 2) {
    auto closest = std::min_element(report.points.begin(), report.points.end(), [](const auto& a, const auto& b) {
      return std::abs(a.derivative - 1.0) < std::abs(b.derivative - 1.0);
    });
    closest->stability = Stability::tangent;
    report.tangent_degenerate = true;
  }
  for (const auto& p : report.points) {
    if (p.stability == Stability::tangent) report.tangent_degenerate = true;
  }
  return report;
}

FixedPointReport find_fixed_points(const GaussianParams& params, const FixedPointOptions& opts) {
  const GaussianModel model(params);
  FixedPointReport report = find_fixed_points(model.update_map(), opts);
  report.is_contraction = contraction_check(params);
  report.three_fp_sufficient = params.alpha < 1.0 && three_fp_sufficient(params);
  return report;
}

void classify_basins(FixedPointReport& report, const UpdateMap& map) {
  report.basins.clear();
  const auto& pts = report.points;
  if (pts.empty()) return;

  // Pieces in left-to-right order: open gaps between points and the points
  // themselves. On a gap the sign of f - id says which neighbour attracts.
  std::vector<Basin> pieces;
  auto add_gap = [&](double lo, double hi, bool lo_closed, bool hi_closed, std::size_t left, std::size_t right,
                     bool has_left, bool has_right) {
    if (hi < lo || (hi == lo && !(lo_closed && hi_closed))) return;
    const double mid = 0.5 * (lo + hi);
    const double gm = map.eval(mid) - mid;
    std::size_t target;
    if (!has_left) {
      target = right;
    } else if (!has_right) {
      target = left;
    } else {
      target = gm > 0.0 ? right : left;
    }
    pieces.push_back({lo, hi, lo_closed, hi_closed, target});
  };

  add_gap(0.0, pts.front().z, true, false, 0, 0, false, true);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pieces.push_back({pts[i].z, pts[i].z, true, true, i});
    if (i + 1 < pts.size()) add_gap(pts[i].z, pts[i + 1].z, false, false, i, i + 1, true, true);
  }
  add_gap(pts.back().z, 1.0, false, true, pts.size() - 1, 0, true, false);

  for (const auto& piece : pieces) {
    if (!report.basins.empty() && report.basins.back().target == piece.target) {
      report.basins.back().hi = piece.hi;
      report.basins.back().hi_closed = piece.hi_closed;
    } else {
      report.basins.push_back(piece);
    }
  }
}

FixedPointReport analyze(const GaussianParams& params) {
  FixedPointReport report = find_fixed_points(params);
  classify_basins(report, GaussianModel(params).update_map());
  return report;
}

const char* survey_filter_name(SurveyFilter f) {
  switch (f) {
    case SurveyFilter::remark: return "remark";
    case SurveyFilter::remark_literal: return "remark-literal";
    case SurveyFilter::contraction: return "contraction";
    case SurveyFilter::all: return "all";
  }
  return "unknown";
}

std::optional<SurveyFilter> parse_survey_filter(const std::string& name) {
  for (auto f : {SurveyFilter::remark, SurveyFilter::remark_literal, SurveyFilter::contraction, SurveyFilter::all}) {
    if (name == survey_filter_name(f)) return f;
  }
  return std::nullopt;
}

std::vector<double> survey_axis(std::size_t n) {
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return axis;
}

SurveyResult grid_multiplicity_survey(std::size_t n, SurveyFilter filter) {
  if (n == 0) throw DomainError("grid_multiplicity_survey: grid_points_per_axis must be positive");
  const auto axis = survey_axis(n);
  const std::size_t total = n * n * n * n * n;

  struct Slot {
    bool selected = false;
    SurveyCase c{};
  };
  std::vector<Slot> slots(total);

  parallel_for(total, [&](std::size_t idx) {
    std::size_t r = idx;
    const double tau = axis[r % n];
    r /= n;
    const double sigma = axis[r % n];
    r /= n;
    const double gamma = axis[r % n];
    r /= n;
    const double beta = axis[r % n];
    r /= n;
    const double alpha = axis[r];
    const GaussianParams p{alpha, beta, gamma, sigma, tau};

    double K;
    try {
      K = eval_K(p);
    } catch (const DegenerateModelError&) {
      return;
    }
    const double a = 1.0 - alpha;
    const bool contraction = a <= 0.0 || K <= kSqrt2Pi / a;
    const bool tau_in = tau >= 0.0 && tau <= a;
    const bool steep = !contraction;
    bool keep = false;
    switch (filter) {
      case SurveyFilter::remark: keep = tau_in && steep; break;
      case SurveyFilter::remark_literal: keep = tau_in || steep; break;
      case SurveyFilter::contraction: keep = contraction; break;
      case SurveyFilter::all: keep = true; break;
    }
    if (!keep) return;
    const auto report = find_fixed_points(GaussianModel(p).update_map());
    slots[idx].selected = true;
    slots[idx].c = {p, static_cast<int>(report.points.size()), K, contraction};
  });

  SurveyResult out{0.0, 0, 0, {}};
  for (const auto& s : slots) {
    if (!s.selected) continue;
    ++out.n_filtered;
    if (s.c.n_fixed_points == 3) ++out.n_three_fp;
    out.cases.push_back(s.c);
  }
  if (out.n_filtered == 0) throw DomainError("grid_multiplicity_survey: filter selects no grid tuples");
  out.fraction_three_fp = static_cast<double>(out.n_three_fp) / static_cast<double>(out.n_filtered);
  return out;
}

}  // namespace dynlab

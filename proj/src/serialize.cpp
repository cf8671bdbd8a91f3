#include "dynlab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dynlab {
namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json num_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json to_json(const GaussianParams& p) {
  return {{"alpha", num(p.alpha)}, {"beta", num(p.beta)}, {"gamma", num(p.gamma)},
          {"sigma", num(p.sigma)}, {"tau", num(p.tau)}};
}

Json to_json(const FixedPointReport& r) {
  Json points = Json::array();
  Json derivative = Json::array();
  Json stability = Json::array();
  for (const auto& p : r.points) {
    points.push_back(num(p.z));
    derivative.push_back(num(p.derivative));
    stability.push_back(stability_name(p.stability));
  }
  Json basins = Json::array();
  for (const auto& b : r.basins) {
    basins.push_back({{"lo", num(b.lo)},
                      {"hi", num(b.hi)},
                      {"lo_closed", b.lo_closed},
                      {"hi_closed", b.hi_closed},
                      {"target", b.target},
                      {"target_z", num(r.points[b.target].z)}});
  }
  return {{"points", points},
          {"derivative", derivative},
          {"stability", stability},
          {"basins", basins},
          {"is_contraction", opt(r.is_contraction)},
          {"three_fp_sufficient", opt(r.three_fp_sufficient)},
          {"tangent_degenerate", r.tangent_degenerate},
          {"map", r.descriptor}};
}

Json to_json(const Trajectory& t) {
  Json j = {{"terminal", terminal_name(t.terminal)}, {"steps", t.steps}, {"x0", num(t.states.front())},
            {"last", num(t.states.back())}};
  if (t.terminal == Terminal::converged) j["limit"] = num(t.limit);
  if (t.terminal == Terminal::cycle) {
    j["period"] = t.period;
    j["support"] = num_array(t.support);
  }
  return j;
}

Json to_json(const Comparison& c) {
  return {{"base_value", num(c.base_value)},
          {"perturbed_value", num(c.perturbed_value)},
          {"comparable", c.comparable},
          {"diffs", c.comparable ? Json{num(c.diffs[0]), num(c.diffs[1]), num(c.diffs[2])} : Json(nullptr)},
          {"theorem_holds", c.comparable ? Json(c.theorem_holds) : Json(nullptr)},
          {"note", c.note},
          {"base", to_json(c.base)},
          {"perturbed", c.perturbed.points.empty() ? Json(nullptr) : to_json(c.perturbed)}};
}

Json to_json(const DeltaReport& d) { return {{"delta", num(d.delta)}, {"argmax_x", num(d.argmax_x)}}; }

Json to_json(const SubsidyPlan& p) {
  return {{"cost_c", num(p.cost_c)},
          {"lambda", num(p.lambda_weight)},
          {"rho", num(p.rho)},
          {"mu0", num(p.mu0)},
          {"z2", num(p.z2)},
          {"horizon_T", p.horizon_T},
          {"reachable", p.reachable},
          {"loss", num(p.loss)},
          {"loss_cost_part", num(p.loss_cost_part)},
          {"loss_distance_part", num(p.loss_distance_part)},
          {"states", num_array(p.states)}};
}

Json to_json(const OptimalityVerdict& v) {
  Json grid = Json::array();
  for (const auto& g : v.grid) {
    grid.push_back({{"cost_c", num(g.cost_c)}, {"loss", num(g.loss)}, {"horizon_T", g.horizon_T},
                    {"reachable", g.reachable}});
  }
  Json cand = to_json(v.candidate_plan);
  cand.erase("states");
  return {{"lambda", num(v.lambda_weight)},
          {"rho", num(v.rho)},
          {"mu0", num(v.mu0)},
          {"z2", num(v.z2)},
          {"delta", num(v.delta)},
          {"one_shot_cost", num(v.one_shot_cost)},
          {"one_shot_loss", num(v.one_shot_loss)},
          {"precondition", v.precondition},
          {"rho_ge_lambda", v.rho_ge_lambda},
          {"candidate_c", num(v.candidate_c)},
          {"candidate_condition", v.candidate_condition},
          {"min_cost_condition", v.min_cost_condition},
          {"candidate_plan", cand},
          {"candidate_beats_one_shot", v.candidate_beats_one_shot},
          {"best_grid_c", num(v.best_grid_c)},
          {"best_grid_loss", num(v.best_grid_loss)},
          {"one_shot_best_on_grid", v.one_shot_best_on_grid},
          {"grid", grid}};
}

Json to_json(const DpResult& r) {
  return {{"schedule", num_array(r.schedule)},
          {"states", num_array(r.states)},
          {"loss", num(r.loss)},
          {"reaches_target", r.reaches_target},
          {"start_state", num(r.start_state)},
          {"wealth_step", num(r.wealth_step)},
          {"cost_step", num(r.cost_step)},
          {"snap_error", num(r.snap_error)},
          {"sweeps", r.sweeps}};
}

Json to_json(const EquivalenceResult& r) {
  return {{"held", r.held},
          {"max_deviation", num(r.max_deviation)},
          {"horizon_u", opt(r.horizon_u)},
          {"horizon_v", opt(r.horizon_v)}};
}

Json to_json(const ParetoAcceptance& a) {
  return {{"f", num(a.f)}, {"accept_all", a.accept_all}, {"lo", num(a.lo)}, {"hi", num(a.hi)},
          {"empty", a.empty}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  out << "step,x\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) out << i << ',' << format_double(t.states[i]) << '\n';
  return out.str();
}

std::string cobweb_csv(const std::vector<Segment>& segments) {
  std::ostringstream out;
  out << "segment_index,x0,y0,x1,y1\n";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    out << i << ',' << format_double(s.x0) << ',' << format_double(s.y0) << ',' << format_double(s.x1) << ','
        << format_double(s.y1) << '\n';
  }
  return out.str();
}

std::string survey_csv(const SurveyResult& r) {
  std::ostringstream out;
  out << "alpha,beta,gamma,sigma,tau,n_fixed_points,K,contraction\n";
  for (const auto& c : r.cases) {
    out << format_double(c.params.alpha) << ',' << format_double(c.params.beta) << ','
        << format_double(c.params.gamma) << ',' << format_double(c.params.sigma) << ','
        << format_double(c.params.tau) << ',' << c.n_fixed_points << ',' << format_double(c.K) << ','
        << (c.contraction ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string comparison_csv(const Comparison& c) {
  std::ostringstream out;
  out << "tau_or_beta,z1,z2,z3\n";
  auto row = [&](double v, const FixedPointReport& r) {
    out << format_double(v);
    for (std::size_t i = 0; i < 3; ++i) {
      out << ',';
      if (i < r.points.size() && r.points.size() == 3) out << format_double(r.points[i].z);
    }
    out << '\n';
  };
  row(c.base_value, c.base);
  row(c.perturbed_value, c.perturbed);
  return out.str();
}

}  // namespace dynlab

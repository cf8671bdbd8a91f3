#include "dynlab/dynlab.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "dynlab/alt_models.hpp"
#include "dynlab/discrete_model.hpp"
#include "dynlab/dynamics.hpp"
#include "dynlab/errors.hpp"
#include "dynlab/fixed_points.hpp"
#include "dynlab/gaussian_model.hpp"
#include "dynlab/interventions.hpp"
#include "dynlab/parallel.hpp"
#include "dynlab/serialize.hpp"
#include "dynlab/special_functions.hpp"

struct dynlab_text {
  std::string body;
};

struct dynlab_model {
  dynlab::GaussianModel model;
};

struct dynlab_report {
  dynlab::FixedPointReport report;
};

struct dynlab_trajectory {
  dynlab::Trajectory trajectory;
};

struct dynlab_generic_map {
  dynlab::GenericUpdateMap map;
};

namespace {

thread_local std::string g_last_error;

class InvalidArgument : public std::exception {
 public:
  explicit InvalidArgument(const char* what) : what_(what) {}
  const char* what() const noexcept override { return what_; }

 private:
  const char* what_;
};

template <typename T>
T& need(T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(what);
  return *p;
}

template <typename Fn>
dynlab_status guard(Fn&& fn) {
  try {
    fn();
    return DYNLAB_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what();
    return DYNLAB_ERR_INVALID_ARGUMENT;
  } catch (const dynlab::DegenerateModelError& e) {
    g_last_error = e.what();
    return DYNLAB_ERR_DEGENERATE_MODEL;
  } catch (const dynlab::DomainError& e) {
    g_last_error = e.what();
    return DYNLAB_ERR_DOMAIN;
  } catch (const dynlab::ShapeViolationError& e) {
    g_last_error = e.what();
    return DYNLAB_ERR_SHAPE_VIOLATION;
  } catch (const dynlab::NumericError& e) {
    g_last_error = e.what();
    return DYNLAB_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DYNLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DYNLAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DYNLAB_ERR_INTERNAL;
  }
}

void emit(dynlab_text** out, std::string body) {
  if (out != nullptr) *out = new dynlab_text{std::move(body)};
}

dynlab::GaussianParams to_params(const dynlab_gaussian_params& p) {
  return {p.alpha, p.beta, p.gamma, p.sigma, p.tau};
}

dynlab::IterateOptions to_options(const dynlab_iterate_options* opts) {
  dynlab::IterateOptions o;
  if (opts != nullptr) {
    if (opts->max_steps > 0) o.max_steps = opts->max_steps;
    if (opts->tol > 0.0) o.tol = opts->tol;
    if (opts->tol < 0.0 || std::isnan(opts->tol)) throw dynlab::DomainError("iterate: tol must be positive");
  }
  return o;
}

dynlab::DiscreteCase to_case(int which) {
  if (which < 1 || which > 3) throw dynlab::DomainError("discrete: case must be 1, 2 or 3");
  return static_cast<dynlab::DiscreteCase>(which);
}

dynlab::DiscreteParams to_params(const dynlab_discrete_params& p) {
  dynlab::DiscreteParams q;
  q.p = p.p;
  q.beta_thr = p.beta;
  q.alpha_mix = p.alpha;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) q.A[i][j] = p.A[i][j];
  }
  return q;
}

dynlab::BernGaussParams to_params(const dynlab_bern_gauss_params& p) { return {p.p, p.beta, p.sigma, p.alpha}; }

void write_comparison(const dynlab::Comparison& c, int* comparable, int* holds, dynlab_text** json,
                      dynlab_text** csv) {
  if (comparable) *comparable = c.comparable ? 1 : 0;
  if (holds) *holds = c.theorem_holds ? 1 : 0;
  emit(json, dynlab::dump(dynlab::to_json(c)));
  emit(csv, dynlab::comparison_csv(c));
}

}  // namespace

extern "C" {

const char* dynlab_version(void) { return "0.1.0"; }

const char* dynlab_status_name(dynlab_status status) {
  switch (status) {
    case DYNLAB_OK: return "ok";
    case DYNLAB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case DYNLAB_ERR_DOMAIN: return "domain-error";
    case DYNLAB_ERR_DEGENERATE_MODEL: return "degenerate-model";
    case DYNLAB_ERR_SHAPE_VIOLATION: return "shape-violation";
    case DYNLAB_ERR_NUMERIC: return "numeric-error";
    case DYNLAB_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* dynlab_last_error_message(void) { return g_last_error.c_str(); }

void dynlab_set_max_threads(unsigned n) { dynlab::set_max_threads(n); }

const char* dynlab_text_data(const dynlab_text* text) { return text ? text->body.c_str() : ""; }
size_t dynlab_text_size(const dynlab_text* text) { return text ? text->body.size() : 0; }
void dynlab_text_free(dynlab_text* text) { delete text; }

dynlab_status dynlab_normal_cdf(double z, double* out) {
  return guard([&] { need(out, "out is NULL") = dynlab::normal_cdf(z); });
}

dynlab_status dynlab_normal_pdf(double z, double* out) {
  return guard([&] { need(out, "out is NULL") = dynlab::normal_pdf(z); });
}

dynlab_status dynlab_normal_quantile(double p, double* out) {
  return guard([&] { need(out, "out is NULL") = dynlab::normal_quantile(p); });
}

dynlab_status dynlab_model_create(const dynlab_gaussian_params* params, dynlab_model** out) {
  return guard([&] {
    const auto& p = need(params, "params is NULL");
    need(out, "out is NULL") = new dynlab_model{dynlab::GaussianModel(to_params(p))};
  });
}

void dynlab_model_free(dynlab_model* model) { delete model; }

dynlab_status dynlab_model_K(const dynlab_model* model, double* out) {
  return guard([&] { need(out, "out is NULL") = need(model, "model is NULL").model.K(); });
}

dynlab_status dynlab_model_update(const dynlab_model* model, double x, double* out) {
  return guard([&] { need(out, "out is NULL") = need(model, "model is NULL").model.update(x); });
}

dynlab_status dynlab_model_derivatives(const dynlab_model* model, double x, double* first, double* second) {
  return guard([&] {
    const auto d = need(model, "model is NULL").model.derivatives(x);
    if (first) *first = d.first;
    if (second) *second = d.second;
  });
}

dynlab_status dynlab_model_inflection_point(const dynlab_model* model, double* out) {
  return guard([&] { need(out, "out is NULL") = need(model, "model is NULL").model.inflection_point(); });
}

dynlab_status dynlab_model_posterior_means(const dynlab_model* model, double mu, double s, double* e_type,
                                           double* e_wealth) {
  return guard([&] {
    const auto pm = need(model, "model is NULL").model.posterior_means(mu, s);
    if (e_type) *e_type = pm.e_type;
    if (e_wealth) *e_wealth = pm.e_wealth;
  });
}

dynlab_status dynlab_model_score_threshold(const dynlab_model* model, double mu, double* out) {
  return guard([&] { need(out, "out is NULL") = need(model, "model is NULL").model.score_threshold(mu); });
}

dynlab_status dynlab_model_monte_carlo(const dynlab_model* model, double mu, uint64_t n, uint64_t seed,
                                       double* fraction, double* std_error) {
  return guard([&] {
    const auto est = dynlab::monte_carlo_admit_fraction(need(model, "model is NULL").model, mu, n, seed);
    if (fraction) *fraction = est.fraction;
    if (std_error) *std_error = est.std_error;
  });
}

dynlab_status dynlab_model_contraction_check(const dynlab_model* model, int* out) {
  return guard([&] {
    need(out, "out is NULL") = dynlab::contraction_check(need(model, "model is NULL").model.params()) ? 1 : 0;
  });
}

dynlab_status dynlab_model_three_fp_sufficient(const dynlab_model* model, int* out) {
  return guard([&] {
    const auto& p = need(model, "model is NULL").model.params();
    need(out, "out is NULL") = (p.alpha < 1.0 && dynlab::three_fp_sufficient(p)) ? 1 : 0;
  });
}

dynlab_status dynlab_analyze(const dynlab_model* model, dynlab_report** out) {
  return guard([&] {
    const auto& m = need(model, "model is NULL");
    need(out, "out is NULL") = new dynlab_report{dynlab::analyze(m.model.params())};
  });
}

void dynlab_report_free(dynlab_report* report) { delete report; }

size_t dynlab_report_count(const dynlab_report* report) { return report ? report->report.points.size() : 0; }

dynlab_status dynlab_report_point(const dynlab_report* report, size_t index, double* z, double* derivative,
                                  dynlab_stability* stability) {
  return guard([&] {
    const auto& r = need(report, "report is NULL").report;
    if (index >= r.points.size()) throw InvalidArgument("fixed point index out of range");
    const auto& p = r.points[index];
    if (z) *z = p.z;
    if (derivative) *derivative = p.derivative;
    if (stability) *stability = static_cast<dynlab_stability>(p.stability);
  });
}

size_t dynlab_report_basin_count(const dynlab_report* report) { return report ? report->report.basins.size() : 0; }

dynlab_status dynlab_report_basin(const dynlab_report* report, size_t index, double* lo, double* hi, int* lo_closed,
                                  int* hi_closed, size_t* target) {
  return guard([&] {
    const auto& r = need(report, "report is NULL").report;
    if (index >= r.basins.size()) throw InvalidArgument("basin index out of range");
    const auto& b = r.basins[index];
    if (lo) *lo = b.lo;
    if (hi) *hi = b.hi;
    if (lo_closed) *lo_closed = b.lo_closed ? 1 : 0;
    if (hi_closed) *hi_closed = b.hi_closed ? 1 : 0;
    if (target) *target = b.target;
  });
}

int dynlab_report_tangent_degenerate(const dynlab_report* report) {
  return report && report->report.tangent_degenerate ? 1 : 0;
}

dynlab_status dynlab_report_json(const dynlab_report* report, dynlab_text** out) {
  return guard([&] {
    need(out, "out is NULL");
    emit(out, dynlab::dump(dynlab::to_json(need(report, "report is NULL").report)));
  });
}

dynlab_status dynlab_sweep(size_t points_per_axis, dynlab_survey_filter filter, double* fraction, size_t* n_filtered,
                           size_t* n_three_fp, dynlab_text** csv) {
  return guard([&] {
    if (filter < DYNLAB_FILTER_REMARK || filter > DYNLAB_FILTER_ALL) throw InvalidArgument("unknown survey filter");
    const auto r = dynlab::grid_multiplicity_survey(points_per_axis, static_cast<dynlab::SurveyFilter>(filter));
    if (fraction) *fraction = r.fraction_three_fp;
    if (n_filtered) *n_filtered = r.n_filtered;
    if (n_three_fp) *n_three_fp = r.n_three_fp;
    emit(csv, dynlab::survey_csv(r));
  });
}

dynlab_status dynlab_simulate(const dynlab_model* model, double x0, const dynlab_iterate_options* opts,
                              dynlab_trajectory** out) {
  return guard([&] {
    const auto& m = need(model, "model is NULL").model;
    need(out, "out is NULL");
    *out = new dynlab_trajectory{dynlab::iterate([&m](double x) { return m.update(x); }, x0, to_options(opts))};
  });
}

dynlab_status dynlab_iterate_fn(dynlab_map_fn fn, void* user, double x0, const dynlab_iterate_options* opts,
                                dynlab_trajectory** out) {
  return guard([&] {
    need(fn, "fn is NULL");
    need(out, "out is NULL");
    *out = new dynlab_trajectory{dynlab::iterate([fn, user](double x) { return fn(x, user); }, x0, to_options(opts))};
  });
}

void dynlab_trajectory_free(dynlab_trajectory* trajectory) { delete trajectory; }

dynlab_terminal dynlab_trajectory_terminal(const dynlab_trajectory* t) {
  return t ? static_cast<dynlab_terminal>(t->trajectory.terminal) : DYNLAB_MAX_ITERATIONS;
}
size_t dynlab_trajectory_steps(const dynlab_trajectory* t) { return t ? t->trajectory.steps : 0; }
size_t dynlab_trajectory_length(const dynlab_trajectory* t) { return t ? t->trajectory.states.size() : 0; }
const double* dynlab_trajectory_states(const dynlab_trajectory* t) {
  return t ? t->trajectory.states.data() : nullptr;
}
double dynlab_trajectory_limit(const dynlab_trajectory* t) { return t ? t->trajectory.limit : NAN; }
size_t dynlab_trajectory_period(const dynlab_trajectory* t) { return t ? t->trajectory.period : 0; }

dynlab_status dynlab_trajectory_json(const dynlab_trajectory* t, dynlab_text** out) {
  return guard([&] {
    need(out, "out is NULL");
    emit(out, dynlab::dump(dynlab::to_json(need(t, "trajectory is NULL").trajectory)));
  });
}

dynlab_status dynlab_trajectory_csv(const dynlab_trajectory* t, dynlab_text** out) {
  return guard([&] {
    need(out, "out is NULL");
    emit(out, dynlab::trajectory_csv(need(t, "trajectory is NULL").trajectory));
  });
}

dynlab_status dynlab_trajectory_cobweb_csv(const dynlab_trajectory* t, dynlab_text** out) {
  return guard([&] {
    need(out, "out is NULL");
    emit(out, dynlab::cobweb_csv(dynlab::cobweb_points(need(t, "trajectory is NULL").trajectory)));
  });
}

dynlab_status dynlab_generic_map_from_model(const dynlab_model* model, dynlab_generic_map** out) {
  return guard([&] {
    const auto& m = need(model, "model is NULL").model;
    need(out, "out is NULL") = new dynlab_generic_map{dynlab::GenericUpdateMap(m.update_map())};
  });
}

dynlab_status dynlab_generic_map_from_fn(dynlab_map_fn fn, void* user, dynlab_generic_map** out) {
  return guard([&] {
    need(fn, "fn is NULL");
    need(out, "out is NULL");
    auto map = dynlab::make_update_map([fn, user](double x) { return fn(x, user); }, "callback");
    *out = new dynlab_generic_map{dynlab::GenericUpdateMap(std::move(map))};
  });
}

void dynlab_generic_map_free(dynlab_generic_map* map) { delete map; }

dynlab_status dynlab_generic_map_fixed_points(const dynlab_generic_map* map, double* z1, double* z2, double* z3) {
  return guard([&] {
    const auto& m = need(map, "map is NULL").map;
    if (z1) *z1 = m.z1();
    if (z2) *z2 = m.z2();
    if (z3) *z3 = m.z3();
  });
}

dynlab_status dynlab_compare_threshold(const dynlab_model* model, double tau_prime, int* comparable,
                                       int* theorem_holds, dynlab_text** json, dynlab_text** csv) {
  return guard([&] {
    const auto c = dynlab::compare_threshold(need(model, "model is NULL").model.params(), tau_prime);
    write_comparison(c, comparable, theorem_holds, json, csv);
  });
}

dynlab_status dynlab_compare_beta(const dynlab_model* model, double beta_prime, int* comparable, int* theorem_holds,
                                  dynlab_text** json, dynlab_text** csv) {
  return guard([&] {
    const auto c = dynlab::compare_beta(need(model, "model is NULL").model.params(), beta_prime);
    write_comparison(c, comparable, theorem_holds, json, csv);
  });
}

dynlab_status dynlab_compute_delta(const dynlab_generic_map* map, double* delta, double* argmax_x) {
  return guard([&] {
    const auto d = dynlab::compute_delta(need(map, "map is NULL").map);
    if (delta) *delta = d.delta;
    if (argmax_x) *argmax_x = d.argmax_x;
  });
}

dynlab_status dynlab_simulate_subsidy(const dynlab_generic_map* map, const dynlab_subsidy_input* input,
                                      dynlab_subsidy_summary* out, dynlab_text** json) {
  return guard([&] {
    const auto& m = need(map, "map is NULL").map;
    const auto& in = need(input, "input is NULL");
    const auto plan = dynlab::simulate_subsidy(m, in.cost_c, in.lambda, in.rho, in.mu0,
                                               in.max_steps > 0 ? in.max_steps : 1000000);
    if (out) *out = {plan.horizon_T, plan.reachable ? 1 : 0, plan.loss, plan.loss_cost_part, plan.loss_distance_part};
    emit(json, dynlab::dump(dynlab::to_json(plan)));
  });
}

dynlab_status dynlab_check_one_shot(const dynlab_generic_map* map, double lambda, double rho, double mu0,
                                    const double* candidate_c, dynlab_text** json) {
  return guard([&] {
    const auto& m = need(map, "map is NULL").map;
    need(json, "json is NULL");
    std::optional<double> cand;
    if (candidate_c) cand = *candidate_c;
    emit(json, dynlab::dump(dynlab::to_json(dynlab::check_one_shot_optimality(m, lambda, rho, mu0, cand))));
  });
}

dynlab_status dynlab_dp_optimal_subsidy(const dynlab_generic_map* map, double lambda, double rho, double mu0,
                                        size_t wealth_grid, size_t cost_grid, double* loss, dynlab_text** json) {
  return guard([&] {
    const auto r =
        dynlab::dp_optimal_subsidy(need(map, "map is NULL").map, lambda, rho, mu0, wealth_grid, cost_grid);
    if (loss) *loss = r.loss;
    emit(json, dynlab::dump(dynlab::to_json(r)));
  });
}

dynlab_status dynlab_subsidy_equivalence(const dynlab_generic_map* map, double cost_c, double x0, size_t steps,
                                         int* held, dynlab_text** json) {
  return guard([&] {
    const auto r = dynlab::subsidy_form_equivalence(need(map, "map is NULL").map, cost_c, x0, steps);
    if (held) *held = r.held ? 1 : 0;
    emit(json, dynlab::dump(dynlab::to_json(r)));
  });
}

dynlab_status dynlab_affine_threshold(const dynlab_model* model, double a, double b, double x, double* threshold,
                                      double* induced_update) {
  return guard([&] {
    const dynlab::AffineThresholdSchedule sched(need(model, "model is NULL").model.params(), a, b);
    if (threshold) *threshold = sched(x);
    if (induced_update) *induced_update = sched.induced_update(x);
  });
}

dynlab_status dynlab_discrete_lambda_star(double p, double beta, int which_case, double* out) {
  return guard([&] { need(out, "out is NULL") = dynlab::lambda_star(p, beta, to_case(which_case)); });
}

dynlab_status dynlab_discrete_accept_case3(double p, double beta, double alpha, double lambda, int* out) {
  return guard([&] { need(out, "out is NULL") = dynlab::accept_condition_case3(p, beta, alpha, lambda) ? 1 : 0; });
}

dynlab_status dynlab_discrete_update(const dynlab_discrete_params* params, double lambda, int which_case,
                                     double* out) {
  return guard([&] {
    const auto q = to_params(need(params, "params is NULL"));
    need(out, "out is NULL") = dynlab::discrete_update(q, lambda, to_case(which_case));
  });
}

dynlab_status dynlab_discrete_simulate(const dynlab_discrete_params* params, double lambda0, int which_case,
                                       const dynlab_iterate_options* opts, dynlab_trajectory** out) {
  return guard([&] {
    const auto q = to_params(need(params, "params is NULL"));
    need(out, "out is NULL");
    *out = new dynlab_trajectory{dynlab::discrete_simulate(q, lambda0, to_case(which_case), to_options(opts))};
  });
}

dynlab_status dynlab_bg_threshold_k(const dynlab_bern_gauss_params* params, double* out) {
  return guard([&] { need(out, "out is NULL") = dynlab::bg_threshold_k(to_params(need(params, "params is NULL"))); });
}

dynlab_status dynlab_bg_posterior_type(const dynlab_bern_gauss_params* params, double mu, double s, double* out) {
  return guard([&] {
    need(out, "out is NULL") = dynlab::bg_posterior_type(to_params(need(params, "params is NULL")), mu, s);
  });
}

dynlab_status dynlab_bg_score_cutoff(const dynlab_bern_gauss_params* params, double mu, double* out) {
  return guard([&] {
    need(out, "out is NULL") = dynlab::bg_score_cutoff(to_params(need(params, "params is NULL")), mu);
  });
}

dynlab_status dynlab_bg_update(const dynlab_bern_gauss_params* params, double mu, double* out) {
  return guard(
      [&] { need(out, "out is NULL") = dynlab::bg_update(to_params(need(params, "params is NULL")), mu); });
}

dynlab_status dynlab_bg_update_derivative(const dynlab_bern_gauss_params* params, double mu, double* out) {
  return guard([&] {
    need(out, "out is NULL") = dynlab::bg_update_derivative(to_params(need(params, "params is NULL")), mu);
  });
}

dynlab_status dynlab_bg_simulate(const dynlab_bern_gauss_params* params, double mu0,
                                 const dynlab_iterate_options* opts, dynlab_trajectory** out) {
  return guard([&] {
    const auto q = to_params(need(params, "params is NULL"));
    dynlab::validate(q);
    need(out, "out is NULL");
    *out = new dynlab_trajectory{dynlab::iterate([&q](double m) { return dynlab::bg_update(q, m); }, mu0,
                                                 to_options(opts))};
  });
}

dynlab_status dynlab_pareto_acceptance_rule(const dynlab_pareto_params* params, dynlab_pareto_acceptance* out) {
  return guard([&] {
    const auto& p = need(params, "params is NULL");
    const auto a = dynlab::pareto_acceptance({p.x_m, p.shape, p.p, p.beta});
    need(out, "out is NULL") = {a.f, a.accept_all ? 1 : 0, a.lo, a.hi, a.empty ? 1 : 0};
  });
}

}  // extern "C"

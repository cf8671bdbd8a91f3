#ifndef DYNLAB_DYNLAB_H
#define DYNLAB_DYNLAB_H

/*
 * C interface to the wealth-dynamics library.
 *
 * Every fallible call returns a dynlab_status. On failure the message is
 * available from dynlab_last_error_message() on the same thread until the
 * next failing call. Handles are opaque and owned by the caller; release
 * them with the matching *_free function (passing NULL is allowed).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DYNLAB_BUILDING_LIBRARY)
#define DYNLAB_API __declspec(dllexport)
#else
#define DYNLAB_API __declspec(dllimport)
#endif
#else
#define DYNLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dynlab_status {
  DYNLAB_OK = 0,
  DYNLAB_ERR_INVALID_ARGUMENT = 1,
  DYNLAB_ERR_DOMAIN = 2,
  DYNLAB_ERR_DEGENERATE_MODEL = 3,
  DYNLAB_ERR_SHAPE_VIOLATION = 4,
  DYNLAB_ERR_NUMERIC = 5,
  DYNLAB_ERR_INTERNAL = 6
} dynlab_status;

DYNLAB_API const char* dynlab_version(void);
DYNLAB_API const char* dynlab_status_name(dynlab_status status);
DYNLAB_API const char* dynlab_last_error_message(void);

/* 0 restores the default (DYNLAB_THREADS, then hardware concurrency). */
DYNLAB_API void dynlab_set_max_threads(unsigned n);

/* ---- owned text ------------------------------------------------------ */

typedef struct dynlab_text dynlab_text;

DYNLAB_API const char* dynlab_text_data(const dynlab_text* text);
DYNLAB_API size_t dynlab_text_size(const dynlab_text* text);
DYNLAB_API void dynlab_text_free(dynlab_text* text);

/* ---- standard normal -------------------------------------------------- */

DYNLAB_API dynlab_status dynlab_normal_cdf(double z, double* out);
DYNLAB_API dynlab_status dynlab_normal_pdf(double z, double* out);
DYNLAB_API dynlab_status dynlab_normal_quantile(double p, double* out);

/* ---- Gaussian admission model ------------------------------------------ */

typedef struct dynlab_gaussian_params {
  double alpha;
  double beta;
  double gamma;
  double sigma;
  double tau;
} dynlab_gaussian_params;

typedef struct dynlab_model dynlab_model;

DYNLAB_API dynlab_status dynlab_model_create(const dynlab_gaussian_params* params, dynlab_model** out);
DYNLAB_API void dynlab_model_free(dynlab_model* model);

DYNLAB_API dynlab_status dynlab_model_K(const dynlab_model* model, double* out);
DYNLAB_API dynlab_status dynlab_model_update(const dynlab_model* model, double x, double* out);
DYNLAB_API dynlab_status dynlab_model_derivatives(const dynlab_model* model, double x, double* first,
                                                  double* second);
DYNLAB_API dynlab_status dynlab_model_inflection_point(const dynlab_model* model, double* out);
DYNLAB_API dynlab_status dynlab_model_posterior_means(const dynlab_model* model, double mu, double s,
                                                      double* e_type, double* e_wealth);
DYNLAB_API dynlab_status dynlab_model_score_threshold(const dynlab_model* model, double mu, double* out);
DYNLAB_API dynlab_status dynlab_model_monte_carlo(const dynlab_model* model, double mu, uint64_t n, uint64_t seed,
                                                  double* fraction, double* std_error);
DYNLAB_API dynlab_status dynlab_model_contraction_check(const dynlab_model* model, int* out);
DYNLAB_API dynlab_status dynlab_model_three_fp_sufficient(const dynlab_model* model, int* out);

/* ---- fixed points ---------------------------------------------------- */

typedef enum dynlab_stability {
  DYNLAB_ATTRACTING = 0,
  DYNLAB_UNSTABLE = 1,
  DYNLAB_TANGENT = 2
} dynlab_stability;

typedef struct dynlab_report dynlab_report;

/* Fixed points, stability, basins and the two condition flags. */
DYNLAB_API dynlab_status dynlab_analyze(const dynlab_model* model, dynlab_report** out);
DYNLAB_API void dynlab_report_free(dynlab_report* report);

DYNLAB_API size_t dynlab_report_count(const dynlab_report* report);
DYNLAB_API dynlab_status dynlab_report_point(const dynlab_report* report, size_t index, double* z,
                                             double* derivative, dynlab_stability* stability);
DYNLAB_API size_t dynlab_report_basin_count(const dynlab_report* report);
DYNLAB_API dynlab_status dynlab_report_basin(const dynlab_report* report, size_t index, double* lo, double* hi,
                                             int* lo_closed, int* hi_closed, size_t* target);
DYNLAB_API int dynlab_report_tangent_degenerate(const dynlab_report* report);
DYNLAB_API dynlab_status dynlab_report_json(const dynlab_report* report, dynlab_text** out);

typedef enum dynlab_survey_filter {
  DYNLAB_FILTER_REMARK = 0,
  DYNLAB_FILTER_REMARK_LITERAL = 1,
  DYNLAB_FILTER_CONTRACTION = 2,
  DYNLAB_FILTER_ALL = 3
} dynlab_survey_filter;

/* Grid survey over (alpha, beta, gamma, sigma, tau) with values (i + 0.5)/n.
 * csv may be NULL. */
DYNLAB_API dynlab_status dynlab_sweep(size_t points_per_axis, dynlab_survey_filter filter, double* fraction,
                                      size_t* n_filtered, size_t* n_three_fp, dynlab_text** csv);

/* ---- dynamics -------------------------------------------------------- */

typedef enum dynlab_terminal {
  DYNLAB_CONVERGED = 0,
  DYNLAB_CYCLE = 1,
  DYNLAB_MAX_ITERATIONS = 2
} dynlab_terminal;

typedef struct dynlab_iterate_options {
  size_t max_steps; /* 0 selects 1000000 */
  double tol;       /* 0 selects 1e-10 */
} dynlab_iterate_options;

typedef double (*dynlab_map_fn)(double x, void* user);

typedef struct dynlab_trajectory dynlab_trajectory;

/* opts may be NULL. */
DYNLAB_API dynlab_status dynlab_simulate(const dynlab_model* model, double x0, const dynlab_iterate_options* opts,
                                         dynlab_trajectory** out);
DYNLAB_API dynlab_status dynlab_iterate_fn(dynlab_map_fn fn, void* user, double x0,
                                           const dynlab_iterate_options* opts, dynlab_trajectory** out);
DYNLAB_API void dynlab_trajectory_free(dynlab_trajectory* trajectory);

DYNLAB_API dynlab_terminal dynlab_trajectory_terminal(const dynlab_trajectory* trajectory);
DYNLAB_API size_t dynlab_trajectory_steps(const dynlab_trajectory* trajectory);
DYNLAB_API size_t dynlab_trajectory_length(const dynlab_trajectory* trajectory);
DYNLAB_API const double* dynlab_trajectory_states(const dynlab_trajectory* trajectory);
DYNLAB_API double dynlab_trajectory_limit(const dynlab_trajectory* trajectory);
DYNLAB_API size_t dynlab_trajectory_period(const dynlab_trajectory* trajectory);
DYNLAB_API dynlab_status dynlab_trajectory_json(const dynlab_trajectory* trajectory, dynlab_text** out);
DYNLAB_API dynlab_status dynlab_trajectory_csv(const dynlab_trajectory* trajectory, dynlab_text** out);
DYNLAB_API dynlab_status dynlab_trajectory_cobweb_csv(const dynlab_trajectory* trajectory, dynlab_text** out);

/* ---- interventions ----------------------------------------------------- */

typedef struct dynlab_generic_map dynlab_generic_map;

/* The map must have three fixed points with alternating sign of f - id.
 * For dynlab_generic_map_from_fn, fn and user must outlive the handle. */
DYNLAB_API dynlab_status dynlab_generic_map_from_model(const dynlab_model* model, dynlab_generic_map** out);
DYNLAB_API dynlab_status dynlab_generic_map_from_fn(dynlab_map_fn fn, void* user, dynlab_generic_map** out);
DYNLAB_API void dynlab_generic_map_free(dynlab_generic_map* map);
DYNLAB_API dynlab_status dynlab_generic_map_fixed_points(const dynlab_generic_map* map, double* z1, double* z2,
                                                         double* z3);

/* csv may be NULL. Columns: tau_or_beta, z1, z2, z3. */
DYNLAB_API dynlab_status dynlab_compare_threshold(const dynlab_model* model, double tau_prime, int* comparable,
                                                  int* theorem_holds, dynlab_text** json, dynlab_text** csv);
DYNLAB_API dynlab_status dynlab_compare_beta(const dynlab_model* model, double beta_prime, int* comparable,
                                             int* theorem_holds, dynlab_text** json, dynlab_text** csv);

DYNLAB_API dynlab_status dynlab_compute_delta(const dynlab_generic_map* map, double* delta, double* argmax_x);

typedef struct dynlab_subsidy_input {
  double cost_c;
  double lambda;
  double rho;
  double mu0;
  size_t max_steps; /* 0 selects 1000000 */
} dynlab_subsidy_input;

typedef struct dynlab_subsidy_summary {
  size_t horizon_T;
  int reachable;
  double loss;
  double loss_cost_part;
  double loss_distance_part;
} dynlab_subsidy_summary;

/* json may be NULL. */
DYNLAB_API dynlab_status dynlab_simulate_subsidy(const dynlab_generic_map* map, const dynlab_subsidy_input* input,
                                                 dynlab_subsidy_summary* out, dynlab_text** json);

/* candidate_c may be NULL for the default Delta + 1e-4. */
DYNLAB_API dynlab_status dynlab_check_one_shot(const dynlab_generic_map* map, double lambda, double rho, double mu0,
                                               const double* candidate_c, dynlab_text** json);

DYNLAB_API dynlab_status dynlab_dp_optimal_subsidy(const dynlab_generic_map* map, double lambda, double rho,
                                                   double mu0, size_t wealth_grid, size_t cost_grid, double* loss,
                                                   dynlab_text** json);

DYNLAB_API dynlab_status dynlab_subsidy_equivalence(const dynlab_generic_map* map, double cost_c, double x0,
                                                    size_t steps, int* held, dynlab_text** json);

/* Threshold C(x) whose induced update equals a x + b, and that induced value. */
DYNLAB_API dynlab_status dynlab_affine_threshold(const dynlab_model* model, double a, double b, double x,
                                                 double* threshold, double* induced_update);

/* ---- discrete model --------------------------------------------------- */

typedef struct dynlab_discrete_params {
  double p;
  double beta;
  double alpha;
  double A[2][2]; /* A[wealth][accepted] */
} dynlab_discrete_params;

/* which_case: 1 type only, 2 wealth only, 3 mixed. */
DYNLAB_API dynlab_status dynlab_discrete_lambda_star(double p, double beta, int which_case, double* out);
DYNLAB_API dynlab_status dynlab_discrete_accept_case3(double p, double beta, double alpha, double lambda, int* out);
DYNLAB_API dynlab_status dynlab_discrete_update(const dynlab_discrete_params* params, double lambda, int which_case,
                                                double* out);
DYNLAB_API dynlab_status dynlab_discrete_simulate(const dynlab_discrete_params* params, double lambda0,
                                                  int which_case, const dynlab_iterate_options* opts,
                                                  dynlab_trajectory** out);

/* ---- Bernoulli type / Gaussian wealth, Pareto acceptance ---------------- */

typedef struct dynlab_bern_gauss_params {
  double p;
  double beta;
  double sigma;
  double alpha;
} dynlab_bern_gauss_params;

DYNLAB_API dynlab_status dynlab_bg_threshold_k(const dynlab_bern_gauss_params* params, double* out);
DYNLAB_API dynlab_status dynlab_bg_posterior_type(const dynlab_bern_gauss_params* params, double mu, double s,
                                                  double* out);
DYNLAB_API dynlab_status dynlab_bg_score_cutoff(const dynlab_bern_gauss_params* params, double mu, double* out);
DYNLAB_API dynlab_status dynlab_bg_update(const dynlab_bern_gauss_params* params, double mu, double* out);
DYNLAB_API dynlab_status dynlab_bg_update_derivative(const dynlab_bern_gauss_params* params, double mu, double* out);
DYNLAB_API dynlab_status dynlab_bg_simulate(const dynlab_bern_gauss_params* params, double mu0,
                                            const dynlab_iterate_options* opts, dynlab_trajectory** out);

typedef struct dynlab_pareto_params {
  double x_m;
  double shape;
  double p;
  double beta;
} dynlab_pareto_params;

typedef struct dynlab_pareto_acceptance {
  double f;
  int accept_all;
  double lo;
  double hi; /* +inf when accept_all */
  int empty;
} dynlab_pareto_acceptance;

DYNLAB_API dynlab_status dynlab_pareto_acceptance_rule(const dynlab_pareto_params* params,
                                                       dynlab_pareto_acceptance* out);

#ifdef __cplusplus
}
#endif

#endif /* DYNLAB_DYNLAB_H */

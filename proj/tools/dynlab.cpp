// dynlab: command-line front end over the C API.

#include <charconv>
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynlab/dynlab.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

enum class Kind { number, integer, text };

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> keys = {
      {"model", Kind::text},      {"alpha", Kind::number},       {"beta", Kind::number},
      {"gamma", Kind::number},    {"sigma", Kind::number},       {"tau", Kind::number},
      {"x0", Kind::number},       {"max_steps", Kind::integer},  {"tol", Kind::number},
      {"mu", Kind::number},       {"n", Kind::integer},          {"tau_prime", Kind::number},
      {"beta_prime", Kind::number}, {"cost", Kind::number},      {"lambda", Kind::number},
      {"rho", Kind::number},      {"mu0", Kind::number},         {"wealth_grid", Kind::integer},
      {"cost_grid", Kind::integer}, {"candidate_cost", Kind::number}, {"steps", Kind::integer},
      {"grid", Kind::integer},    {"filter", Kind::text},        {"p", Kind::number},
      {"case", Kind::integer},    {"A11", Kind::number},         {"A12", Kind::number},
      {"A21", Kind::number},      {"A22", Kind::number},         {"x_m", Kind::number},
      {"shape", Kind::number},    {"a", Kind::number},           {"b", Kind::number},
      {"x", Kind::number},        {"seed", Kind::integer},
  };
  return keys;
}

// Raised for configuration problems (exit 2) or library failures.
struct Failure : std::runtime_error {
  Failure(int code, std::string kind, const std::string& msg) : std::runtime_error(msg), code(code), kind(std::move(kind)) {}
  int code;
  std::string kind;
};

[[noreturn]] void config_error(const std::string& msg) { throw Failure(kExitConfig, "invalid-config", msg); }

void check(dynlab_status st) {
  if (st == DYNLAB_OK) return;
  const int code = (st == DYNLAB_ERR_SHAPE_VIOLATION || st == DYNLAB_ERR_NUMERIC || st == DYNLAB_ERR_INTERNAL)
                       ? kExitNumeric
                       : kExitConfig;
  throw Failure(code, dynlab_status_name(st), dynlab_last_error_message());
}

struct TextDeleter {
  void operator()(dynlab_text* t) const { dynlab_text_free(t); }
};
using Text = std::unique_ptr<dynlab_text, TextDeleter>;
struct ModelDeleter {
  void operator()(dynlab_model* m) const { dynlab_model_free(m); }
};
using Model = std::unique_ptr<dynlab_model, ModelDeleter>;
struct ReportDeleter {
  void operator()(dynlab_report* r) const { dynlab_report_free(r); }
};
using Report = std::unique_ptr<dynlab_report, ReportDeleter>;
struct TrajectoryDeleter {
  void operator()(dynlab_trajectory* t) const { dynlab_trajectory_free(t); }
};
using Trajectory = std::unique_ptr<dynlab_trajectory, TrajectoryDeleter>;
struct MapDeleter {
  void operator()(dynlab_generic_map* m) const { dynlab_generic_map_free(m); }
};
using GenericMap = std::unique_ptr<dynlab_generic_map, MapDeleter>;

std::string str(const Text& t) { return std::string(dynlab_text_data(t.get()), dynlab_text_size(t.get())); }

json parse_text(const Text& t) { return json::parse(str(t)); }

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Flat key -> value map: config file first, then command-line flags.
class Config {
 public:
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config file: " + path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      config_error("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) config_error("config file must hold a flat JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) {
        set(key, value.get<std::string>());
      } else if (value.is_number()) {
        set(key, value.dump());
      } else {
        config_error("config key '" + key + "' must be a number or a string");
      }
    }
  }

  void set(const std::string& key, const std::string& raw) {
    const auto it = schema().find(key);
    if (it == schema().end()) config_error("unknown config key: " + key);
    values_[key] = raw;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double number(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) config_error("missing required parameter: " + key);
    return parse_number(key, it->second);
  }

  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const double v = number(key);
    if (v < 0.0 || v != std::floor(v) || v > 9.007199254740992e15) {
      config_error("parameter " + key + " must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
  }

 private:
  static double parse_number(const std::string& key, const std::string& raw) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(raw, &used);
    } catch (const std::exception&) {
      config_error("parameter " + key + " is not a number: " + raw);
    }
    if (used != raw.size() || !std::isfinite(v)) config_error("parameter " + key + " is not a finite number: " + raw);
    return v;
  }

  std::map<std::string, std::string> values_;
};

struct Common {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> flags;
};

void write_output(const Common& c, const std::string& body) {
  if (c.out_path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.out_path, std::ios::binary);
  if (!out) config_error("cannot open output file: " + c.out_path);
  out << body;
}

// Status lines go to stdout only when stdout is not carrying the payload.
void status_line(const Common& c, const json& j) {
  (c.out_path.empty() ? std::cerr : std::cout) << j.dump() << "\n";
}

Config build_config(const Common& c) {
  Config cfg;
  if (!c.config_path.empty()) cfg.load_file(c.config_path);
  for (const auto& [k, v] : c.flags) cfg.set(k, v);
  if (c.seed) cfg.set("seed", std::to_string(*c.seed));
  return cfg;
}

dynlab_gaussian_params gaussian_params(const Config& cfg) {
  return {cfg.number("alpha"), cfg.number("beta"), cfg.number("gamma"), cfg.number("sigma"), cfg.number("tau")};
}

Model make_model(const dynlab_gaussian_params& p) {
  dynlab_model* m = nullptr;
  check(dynlab_model_create(&p, &m));
  return Model(m);
}

GenericMap make_map(const Model& model) {
  dynlab_generic_map* m = nullptr;
  check(dynlab_generic_map_from_model(model.get(), &m));
  return GenericMap(m);
}

dynlab_iterate_options iterate_options(const Config& cfg) {
  return {static_cast<size_t>(cfg.integer("max_steps", 1000000)), cfg.number("tol", 1e-10)};
}

dynlab_discrete_params discrete_params(const Config& cfg) {
  dynlab_discrete_params d{};
  d.p = cfg.number("p");
  d.beta = cfg.number("beta");
  d.alpha = cfg.number("alpha", 1.0);
  d.A[0][0] = cfg.number("A11", 0.0);
  d.A[0][1] = cfg.number("A12", 1.0);
  d.A[1][0] = cfg.number("A21", 0.0);
  d.A[1][1] = cfg.number("A22", 1.0);
  return d;
}

dynlab_bern_gauss_params bg_params(const Config& cfg) {
  return {cfg.number("p"), cfg.number("beta"), cfg.number("sigma"), cfg.number("alpha", 1.0)};
}

int discrete_case(const Config& cfg) {
  const auto c = cfg.integer("case", 1);
  if (c < 1 || c > 3) config_error("parameter case must be 1, 2 or 3");
  return static_cast<int>(c);
}

void require_format(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (c.format == f) return;
  }
  config_error("format '" + c.format + "' is not supported by this command");
}

json trajectory_summary(const Trajectory& t) {
  Text text;
  dynlab_text* raw = nullptr;
  check(dynlab_trajectory_json(t.get(), &raw));
  text.reset(raw);
  return parse_text(text);
}

std::string trajectory_csv(const Trajectory& t) {
  dynlab_text* raw = nullptr;
  check(dynlab_trajectory_csv(t.get(), &raw));
  return str(Text(raw));
}

// ---- commands ------------------------------------------------------------

int cmd_analyze(const Common& c) {
  const Config cfg = build_config(c);
  const std::string model = cfg.text("model", "gaussian");
  if (model == "gaussian") {
    require_format(c, {"json", "csv"});
    const Model m = make_model(gaussian_params(cfg));
    dynlab_report* raw = nullptr;
    check(dynlab_analyze(m.get(), &raw));
    const Report report(raw);
    if (c.format == "csv") {
      std::ostringstream out;
      out << "z,derivative,stability\n";
      static const char* names[] = {"attracting", "unstable", "tangent-degenerate"};
      for (size_t i = 0; i < dynlab_report_count(report.get()); ++i) {
        double z = 0, d = 0;
        dynlab_stability s{};
        check(dynlab_report_point(report.get(), i, &z, &d, &s));
        out << fmt(z) << ',' << fmt(d) << ',' << names[s] << '\n';
      }
      write_output(c, out.str());
    } else {
      dynlab_text* t = nullptr;
      check(dynlab_report_json(report.get(), &t));
      write_output(c, str(Text(t)));
    }
    return kExitOk;
  }
  require_format(c, {"json"});
  if (model == "bern-gauss") {
    const auto p = bg_params(cfg);
    const double mu = cfg.number("mu", 0.5);
    double cutoff = 0, update = 0, deriv = 0;
    check(dynlab_bg_score_cutoff(&p, mu, &cutoff));
    check(dynlab_bg_update(&p, mu, &update));
    check(dynlab_bg_update_derivative(&p, mu, &deriv));
    json j = {{"model", model}, {"mu", mu}, {"score_cutoff", cutoff}, {"update", update}, {"update_derivative", deriv}};
    if (p.alpha == 1.0) {
      double k = 0;
      check(dynlab_bg_threshold_k(&p, &k));
      j["k"] = k;
    }
    const auto opts = iterate_options(cfg);
    dynlab_trajectory* raw = nullptr;
    check(dynlab_bg_simulate(&p, cfg.number("x0", mu), &opts, &raw));
    j["trajectory"] = trajectory_summary(Trajectory(raw));
    write_output(c, j.dump(2) + "\n");
    return kExitOk;
  }
  if (model == "pareto") {
    const dynlab_pareto_params p{cfg.number("x_m"), cfg.number("shape"), cfg.number("p"), cfg.number("beta")};
    dynlab_pareto_acceptance a{};
    check(dynlab_pareto_acceptance_rule(&p, &a));
    json j = {{"model", model}, {"f", a.f}, {"accept_all", a.accept_all != 0}, {"lo", a.lo},
              {"hi", a.accept_all ? json(nullptr) : json(a.hi)}, {"empty", a.empty != 0}};
    write_output(c, j.dump(2) + "\n");
    return kExitOk;
  }
  if (model == "discrete") {
    const auto d = discrete_params(cfg);
    json j = {{"model", model}};
    for (int k = 1; k <= 2; ++k) {
      double ls = 0;
      if (dynlab_discrete_lambda_star(d.p, d.beta, k, &ls) == DYNLAB_OK) {
        j["lambda_star_case" + std::to_string(k)] = ls;
      } else {
        j["lambda_star_case" + std::to_string(k)] = nullptr;
      }
    }
    if (cfg.has("x0")) {
      double next = 0;
      check(dynlab_discrete_update(&d, cfg.number("x0"), discrete_case(cfg), &next));
      j["update"] = next;
    }
    write_output(c, j.dump(2) + "\n");
    return kExitOk;
  }
  config_error("unknown model: " + model);
}

int cmd_simulate(const Common& c, const std::string& cobweb_path) {
  require_format(c, {"csv", "json"});
  const Config cfg = build_config(c);
  const std::string model = cfg.text("model", "gaussian");
  const auto opts = iterate_options(cfg);
  dynlab_trajectory* raw = nullptr;
  if (model == "gaussian") {
    const Model m = make_model(gaussian_params(cfg));
    check(dynlab_simulate(m.get(), cfg.number("x0"), &opts, &raw));
  } else if (model == "discrete") {
    const auto d = discrete_params(cfg);
    check(dynlab_discrete_simulate(&d, cfg.number("x0"), discrete_case(cfg), &opts, &raw));
  } else if (model == "bern-gauss") {
    const auto p = bg_params(cfg);
    check(dynlab_bg_simulate(&p, cfg.number("x0"), &opts, &raw));
  } else {
    config_error("simulate supports models gaussian, discrete and bern-gauss");
  }
  const Trajectory t(raw);
  const json summary = trajectory_summary(t);
  if (c.format == "json") {
    write_output(c, summary.dump(2) + "\n");
  } else {
    write_output(c, trajectory_csv(t));
  }
  if (!cobweb_path.empty()) {
    dynlab_text* cw = nullptr;
    check(dynlab_trajectory_cobweb_csv(t.get(), &cw));
    std::ofstream out(cobweb_path, std::ios::binary);
    if (!out) config_error("cannot open cobweb output file: " + cobweb_path);
    out << str(Text(cw));
  }
  status_line(c, summary);
  return kExitOk;
}

int cmd_intervene(const Common& c, const std::string& kind) {
  const Config cfg = build_config(c);
  if (cfg.text("model", "gaussian") != "gaussian") config_error("intervene requires the gaussian model");
  const Model m = make_model(gaussian_params(cfg));

  if (kind == "tau" || kind == "beta") {
    require_format(c, {"json", "csv"});
    dynlab_text* js = nullptr;
    dynlab_text* cs = nullptr;
    int comparable = 0, holds = 0;
    if (kind == "tau") {
      check(dynlab_compare_threshold(m.get(), cfg.number("tau_prime"), &comparable, &holds, &js, &cs));
    } else {
      check(dynlab_compare_beta(m.get(), cfg.number("beta_prime"), &comparable, &holds, &js, &cs));
    }
    const Text jt(js), ct(cs);
    write_output(c, c.format == "csv" ? str(ct) : str(jt));
    status_line(c, {{"comparable", comparable != 0}, {"theorem_holds", comparable ? json(holds != 0) : json(nullptr)}});
    return kExitOk;
  }
  if (kind == "affine") {
    require_format(c, {"json"});
    double threshold = 0, induced = 0;
    const double x = cfg.number("x");
    check(dynlab_affine_threshold(m.get(), cfg.number("a"), cfg.number("b"), x, &threshold, &induced));
    write_output(c, json{{"x", x}, {"threshold", threshold}, {"induced_update", induced}}.dump(2) + "\n");
    return kExitOk;
  }

  require_format(c, {"json"});
  const GenericMap map = make_map(m);
  double z1 = 0, z2 = 0, z3 = 0;
  check(dynlab_generic_map_fixed_points(map.get(), &z1, &z2, &z3));
  const double mu0 = cfg.number("mu0", z1);
  const double lambda = cfg.number("lambda", 0.5);
  const double rho = cfg.number("rho", 0.9);

  dynlab_text* raw = nullptr;
  if (kind == "delta") {
    double delta = 0, argmax = 0;
    check(dynlab_compute_delta(map.get(), &delta, &argmax));
    write_output(c, json{{"delta", delta}, {"argmax_x", argmax}, {"z1", z1}, {"z2", z2}, {"z3", z3}}.dump(2) + "\n");
    return kExitOk;
  }
  if (kind == "subsidy") {
    const dynlab_subsidy_input in{cfg.number("cost", z2 - mu0), lambda, rho, mu0,
                                  static_cast<size_t>(cfg.integer("max_steps", 1000000))};
    dynlab_subsidy_summary s{};
    check(dynlab_simulate_subsidy(map.get(), &in, &s, &raw));
  } else if (kind == "optimality") {
    std::optional<double> cand;
    if (cfg.has("candidate_cost")) cand = cfg.number("candidate_cost");
    check(dynlab_check_one_shot(map.get(), lambda, rho, mu0, cand ? &*cand : nullptr, &raw));
  } else if (kind == "dp") {
    double loss = 0;
    check(dynlab_dp_optimal_subsidy(map.get(), lambda, rho, mu0, cfg.integer("wealth_grid", 200),
                                    cfg.integer("cost_grid", 200), &loss, &raw));
  } else if (kind == "equivalence") {
    int held = 0;
    check(dynlab_subsidy_equivalence(map.get(), cfg.number("cost"), cfg.number("x0", mu0), cfg.integer("steps", 50),
                                     &held, &raw));
  } else {
    config_error("unknown intervention: " + kind);
  }
  write_output(c, str(Text(raw)));
  return kExitOk;
}

int cmd_sweep(const Common& c) {
  require_format(c, {"csv"});
  const Config cfg = build_config(c);
  const std::string filter = cfg.text("filter", "remark");
  static const std::map<std::string, dynlab_survey_filter> filters = {
      {"remark", DYNLAB_FILTER_REMARK},
      {"remark-literal", DYNLAB_FILTER_REMARK_LITERAL},
      {"contraction", DYNLAB_FILTER_CONTRACTION},
      {"all", DYNLAB_FILTER_ALL}};
  const auto it = filters.find(filter);
  if (it == filters.end()) config_error("unknown filter: " + filter);
  double fraction = 0;
  size_t n_filtered = 0, n_three = 0;
  dynlab_text* raw = nullptr;
  check(dynlab_sweep(cfg.integer("grid", 10), it->second, &fraction, &n_filtered, &n_three, &raw));
  write_output(c, str(Text(raw)));
  status_line(c, {{"filter", filter},
                  {"grid", cfg.integer("grid", 10)},
                  {"n_filtered", n_filtered},
                  {"n_three_fp", n_three},
                  {"fraction_three_fp", fraction}});
  return kExitOk;
}

int cmd_oracle(const Common& c) {
  require_format(c, {"json"});
  const Config cfg = build_config(c);
  if (cfg.text("model", "gaussian") != "gaussian") config_error("oracle supports the gaussian model");
  const Model m = make_model(gaussian_params(cfg));
  const double mu = cfg.number("mu");
  const auto n = cfg.integer("n", 1000000);
  const auto seed = cfg.integer("seed", 0);
  double closed = 0, frac = 0, se = 0;
  check(dynlab_model_update(m.get(), mu, &closed));
  check(dynlab_model_monte_carlo(m.get(), mu, n, seed, &frac, &se));
  const double gap = std::abs(frac - closed);
  json j = {{"mu", mu},          {"n", n},         {"seed", seed},
            {"closed_form", closed}, {"fraction", frac}, {"std_error", se},
            {"abs_diff", gap},   {"within_3se", gap <= 3.0 * se}};
  write_output(c, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_discrete(const Common& c) {
  require_format(c, {"json", "csv"});
  const Config cfg = build_config(c);
  const auto d = discrete_params(cfg);
  const int which = discrete_case(cfg);
  const auto opts = iterate_options(cfg);
  dynlab_trajectory* raw = nullptr;
  check(dynlab_discrete_simulate(&d, cfg.number("x0"), which, &opts, &raw));
  const Trajectory t(raw);
  json j = {{"case", which}, {"trajectory", trajectory_summary(t)}};
  if (which != 3) {
    double ls = 0;
    check(dynlab_discrete_lambda_star(d.p, d.beta, which, &ls));
    j["lambda_star"] = ls;
  }
  if (c.format == "csv") {
    write_output(c, trajectory_csv(t));
    status_line(c, j);
  } else {
    write_output(c, j.dump(2) + "\n");
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "flat JSON parameter file");
  sub->add_option("--out", c.out_path, "output path (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option_function<std::uint64_t>("--seed", [&c](const std::uint64_t& s) { c.seed = s; }, "random seed");
  for (const auto& [key, kind] : schema()) {
    if (key == "seed") continue;
    const std::string k = key;
    sub->add_option_function<std::string>("--" + k, [&c, k](const std::string& v) { c.flags[k] = v; });
  }
}

void print_error(const std::string& kind, const std::string& msg) {
  std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wealth-dynamics laboratory"};
  app.require_subcommand(1);

  Common common;
  std::string intervention;
  std::string cobweb_path;

  auto* analyze = app.add_subcommand("analyze", "fixed points, stability and basins");
  auto* simulate = app.add_subcommand("simulate", "iterate the update map");
  auto* intervene = app.add_subcommand("intervene", "threshold, signal and subsidy interventions");
  auto* sweep = app.add_subcommand("sweep", "grid survey of fixed-point multiplicity");
  auto* oracle = app.add_subcommand("oracle", "Monte Carlo check of the update rule");
  auto* discrete = app.add_subcommand("discrete", "binary wealth/type model");
  for (auto* sub : {analyze, simulate, intervene, sweep, oracle, discrete}) add_common(sub, common);
  simulate->add_option("--cobweb", cobweb_path, "write cobweb segments CSV here");
  intervene->add_option("kind", intervention, "tau|beta|subsidy|dp|optimality|delta|equivalence|affine")->required();
  sweep->get_option("--format")->default_str("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("invalid-config", e.what());
    return kExitConfig;
  }

  try {
    if (sweep->parsed() && sweep->get_option("--format")->count() == 0) common.format = "csv";
    if (simulate->parsed() && simulate->get_option("--format")->count() == 0) common.format = "csv";
    if (analyze->parsed()) return cmd_analyze(common);
    if (simulate->parsed()) return cmd_simulate(common, cobweb_path);
    if (intervene->parsed()) return cmd_intervene(common, intervention);
    if (sweep->parsed()) return cmd_sweep(common);
    if (oracle->parsed()) return cmd_oracle(common);
    if (discrete->parsed()) return cmd_discrete(common);
  } catch (const Failure& f) {
    print_error(f.kind, f.what());
    return f.code;
  } catch (const std::exception& e) {
    print_error("internal-error", e.what());
    return kExitNumeric;
  }
  return kExitConfig;
}

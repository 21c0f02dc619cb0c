#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "robtrade/attack.hpp"
#include "robtrade/batch.hpp"
#include "robtrade/curve_io.hpp"
#include "robtrade/data.hpp"
#include "robtrade/errors.hpp"
#include "robtrade/ifa.hpp"
#include "robtrade/io.hpp"
#include "robtrade/linreg_adv.hpp"
#include "robtrade/optimizer.hpp"
#include "robtrade/rng.hpp"
#include "robtrade/tradeoff.hpp"

namespace robtrade::cli {

using json = nlohmann::ordered_json;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const std::string& path, const json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

json index_list(const std::vector<Index>& v) {
  json arr = json::array();
  for (Index i : v) arr.push_back(i);
  return arr;
}

NormOrder norm_setting(const RunConfig& cfg) {
  try {
    return NormOrder::parse(cfg.str("p"));
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("setting 'p': ") + e.what());
  }
}

// Fills in the default attack size when epsilon is unset.
double resolve_epsilon(RunConfig& cfg, NormOrder p) {
  if (!cfg.has("epsilon")) cfg.set("epsilon", p.is_two() ? "0.3" : "0.015");
  const double eps = cfg.number("epsilon");
  if (eps < 0.0) throw ConfigError("setting 'epsilon' must be >= 0");
  return eps;
}

GeneratorConfig generator_from(const RunConfig& cfg) {
  GeneratorConfig g;
  g.design = parse_design(cfg.str("design"));
  g.n = cfg.integer("n");
  g.d = cfg.integer("d");
  if (cfg.command() != "curve" && cfg.command() != "ifa" && cfg.has("s")) g.s = cfg.integer("s");
  g.noise_std = cfg.number("noise_std");
  if (cfg.defines("noise_law")) g.noise_law = parse_noise_law(cfg.str("noise_law"));
  g.signal_scale = cfg.number("signal_scale");
  g.seed = cfg.unsigned_integer("seed");
  return g;
}

TeacherSpec::Kind teacher_kind(const std::string& name) {
  if (name == "linear" || name == "location") return TeacherSpec::Kind::linear;
  if (name == "quadnet") return TeacherSpec::Kind::quadnet;
  if (name == "logistic") return TeacherSpec::Kind::logistic;
  throw ConfigError("unknown teacher/model '" + name + "'");
}

LabeledDataset dataset_from(const RunConfig& cfg) {
  if (cfg.has("data")) return load_csv(cfg.str("data"));
  TeacherSpec teacher;
  teacher.kind = teacher_kind(cfg.str("model"));
  teacher.a = cfg.numbers("quad_a");
  return generate_dataset(generator_from(cfg), teacher);
}

std::string dataset_descriptor(const RunConfig& cfg) {
  if (cfg.has("data")) return "csv:" + cfg.str("data");
  return "generated:" + cfg.str("design");
}

AttackSpec attack_from(const RunConfig& cfg, NormOrder p, double epsilon) {
  AttackSpec spec;
  spec.p = p;
  spec.epsilon = epsilon;
  spec.pgd_steps = static_cast<int>(cfg.integer("pgd_steps"));
  if (cfg.defines("pgd_step_size") && cfg.has("pgd_step_size")) spec.pgd_step_size = cfg.number("pgd_step_size");
  spec.seed = cfg.unsigned_integer("seed");
  if (cfg.defines("inner_solver")) spec.inner = parse_inner_solver(cfg.str("inner_solver"));
  try {
    spec.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

json model_json(const LossModel& model) {
  json j;
  j["name"] = model.name();
  j["param_dim"] = model.param_dim();
  j["input_dim"] = model.input_dim();
  for (const auto& [k, v] : model.describe()) j[k] = v;
  return j;
}

}  // namespace

json envelope(const RunConfig& cfg, json result) {
  json doc;
  doc["tool"] = "robtrade";
  doc["tool_version"] = kToolVersion;
  doc["command"] = cfg.command();
  doc["generator"] = std::string(SeededStream::kGeneratorId);
  doc["seed"] = cfg.unsigned_integer("seed");
  doc["config"] = cfg.to_json();
  doc["result"] = std::move(result);
  doc["created_at"] = utc_timestamp();
  return doc;
}

std::shared_ptr<const LossModel> make_model(const RunConfig& cfg, Index input_dim) {
  const std::string& name = cfg.str("model");
  if (name == "linear") return std::make_shared<LinearModel>(input_dim);
  if (name == "location") return std::make_shared<LocationModel>(input_dim);
  if (name == "logistic") return std::make_shared<LogisticModel>(input_dim);
  if (name == "quadnet") {
    try {
      return std::make_shared<ShallowQuadNet>(input_dim, cfg.numbers("quad_a"), cfg.number("mu"));
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown model '" + name + "' (linear | quadnet | logistic | location)");
}

// ------------------------------------------------------------------- gen

void cmd_gen(RunConfig cfg, std::ostream& log) {
  cfg.require({"n", "d"});
  const auto gen = generator_from(cfg);
  const std::string out = cfg.str("out");
  json result;
  if (!cfg.has("teacher")) {
    const auto problem = generate_problem(gen);
    write_file_atomic(out + ".csv", to_csv(problem.X, problem.Y));
    result["kind"] = "regression_problem";
    result["n"] = problem.n();
    result["d"] = problem.d();
    result["design"] = to_string(gen.design);
    result["realizable"] = problem.realizable;
    result["support"] = index_list(problem.support);
    result["theta_star"] = to_json(*problem.theta_star);
  } else {
    TeacherSpec teacher;
    teacher.kind = teacher_kind(cfg.str("teacher"));
    teacher.a = cfg.numbers("quad_a");
    const auto data = generate_dataset(gen, teacher);
    write_file_atomic(out + ".csv", to_csv(data.X(), data.Y()));
    result["kind"] = "dataset";
    result["teacher"] = cfg.str("teacher");
    result["n"] = data.size();
    result["m"] = data.input_dim();
    result["design"] = to_string(gen.design);
  }
  result["csv"] = out + ".csv";
  write_json(out + ".json", envelope(cfg, std::move(result)));
  log << "wrote " << out << ".csv and " << out << ".json\n";
}

// ----------------------------------------------------------------- curve

void cmd_curve(RunConfig cfg, std::ostream& log) {
  const NormOrder p = norm_setting(cfg);
  const double eps = resolve_epsilon(cfg, p);
  const auto data = dataset_from(cfg);
  const auto model = make_model(cfg, data.input_dim());
  const auto spec = attack_from(cfg, p, eps);
  if (!cfg.has("pgd_step_size")) cfg.set("pgd_step_size", format_double(spec.step_size()));

  OptimizerConfig opt;
  try {
    opt.method = parse_optimizer_method(cfg.str("optimizer"));
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  opt.max_iters = static_cast<int>(cfg.integer("max_iters"));
  opt.grad_tol = cfg.number("grad_tol");
  opt.seed = cfg.unsigned_integer("seed");

  const double fraction = cfg.number("train_fraction");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("train_fraction must lie in (0, 1]");
  TradeoffCurve curve;
  const auto grid = cfg.numbers("xi_grid");
  if (fraction == 1.0) {
    curve = sweep_curve(*model, data, data, grid, spec, opt);
  } else {
    const auto [train, eval] = split(data, fraction, opt.seed);
    curve = sweep_curve(*model, train, eval, grid, spec, opt);
  }
  curve.dataset = dataset_descriptor(cfg) + "," + curve.dataset;

  const std::string out = cfg.str("out");
  write_json(out + ".json", envelope(cfg, curve_to_json(curve)));
  write_file_atomic(out + ".csv", curve_to_csv(curve));
  const std::string dat = out + "_frontier.dat";
  write_file_atomic(dat, frontier_plot_data(curve));
  const auto slash = dat.find_last_of('/');
  write_file_atomic(out + "_frontier.gp",
                    gnuplot_script(slash == std::string::npos ? dat : dat.substr(slash + 1),
                                   model->name() + " trade-off, p=" + p.to_string() +
                                       ", epsilon=" + format_double(eps)));
  for (const auto& pt : curve.points) {
    if (!pt.converged) {
      log << "warning: point xi=" << format_double(pt.xi)
          << " did not reach the gradient tolerance (sup-norm " << pt.grad_norm_final << ")\n";
    }
  }
  log << "wrote " << out << ".json, " << out << ".csv, " << dat << "\n";
}

// ------------------------------------------------------------------- ifa

void cmd_ifa(RunConfig cfg, std::ostream& log) {
  const NormOrder p = norm_setting(cfg);
  const double eps = resolve_epsilon(cfg, p);
  const auto data = dataset_from(cfg);
  const auto model = make_model(cfg, data.input_dim());

  OptimizerConfig fit_cfg;
  fit_cfg.method = OptimizerConfig::Method::newton;
  fit_cfg.max_iters = 1000;
  fit_cfg.grad_tol = 1e-12;
  fit_cfg.seed = cfg.unsigned_integer("seed");

  json fit;
  Vector theta_hat;
  if (cfg.has("theta")) {
    const auto parsed = nlohmann::json::parse(read_file(cfg.str("theta")));
    theta_hat = vector_from_json(parsed.is_object() ? parsed.at("theta") : parsed);
    if (theta_hat.size() != model->param_dim()) {
      throw ConfigError("theta file has " + std::to_string(theta_hat.size()) +
                        " entries, expected " + std::to_string(model->param_dim()));
    }
    fit["source"] = cfg.str("theta");
  } else {
    const auto res = minimize_joint(*model, data, AttackSpec{}, 0.0,
                                    model->initial_parameters(fit_cfg.seed), fit_cfg);
    theta_hat = res.theta;
    fit["source"] = "fitted";
    fit["iterations"] = res.iterations;
    fit["stop_reason"] = res.stop_reason;
  }
  fit["theta_hat"] = to_json(theta_hat);

  IfaOptions opts;
  opts.stationarity_tol = cfg.number("stationarity_tol");
  const auto ifa = compute_ifa(*model, theta_hat, data, p, cfg.number("damping"), opts);
  if (!ifa.degenerate_samples.empty()) {
    log << "warning: " << ifa.degenerate_samples.size()
        << " sample(s) have a zero input gradient and contribute nothing to phi\n";
  }

  const Matrix H = batch_hessian(*model, theta_hat, data);
  json quad;
  try {
    Matrix Hd = H;
    Hd.diagonal().array() += ifa.damping_used;
    const auto q = delta_hat_quadratic(ifa.phi, Hd, H, eps);
    quad["epsilon"] = eps;
    quad["delta_hat"] = q.delta_hat;
    quad["quad_form_value"] = q.quad_form_value;
    quad["bounds_valid"] = q.bounds_valid;
    quad["lower_bound"] = q.lower_bound;
    quad["upper_bound"] = q.upper_bound;
  } catch (const SingularHessianError& e) {
    quad["error"] = e.what();
  }

  AttackSpec retrain = attack_from(cfg, p, 0.0);
  const double step_scale = cfg.number("pgd_step_scale");
  if (!(step_scale > 0.0)) throw ConfigError("pgd_step_scale must be > 0");
  OptimizerConfig re_cfg = fit_cfg;
  re_cfg.grad_tol = cfg.number("retrain_tol");
  re_cfg.max_iters = static_cast<int>(cfg.integer("retrain_max_iters"));
  json sweep = json::array();
  std::string table = "epsilon,error,converged,delta_hat_exact,delta_hat_quadratic\n";
  for (double e : cfg.numbers("eps_sweep")) {
    if (!(e > 0.0)) throw ConfigError("eps_sweep values must be > 0");
    retrain.epsilon = e;
    retrain.pgd_step_size = step_scale * e;
    const auto res = minimize_joint(*model, data, retrain, 1.0, theta_hat, re_cfg);
    const double err = (res.theta - theta_hat - e * ifa.ifa).norm();
    const double exact = delta_hat_exact(*model, theta_hat, res.theta, data);
    double approx = 0.0;
    if (quad.contains("quad_form_value")) approx = 0.5 * quad["quad_form_value"].get<double>() * e * e;
    json row;
    row["epsilon"] = e;
    row["error"] = err;
    row["converged"] = res.converged;
    row["delta_hat_exact"] = exact;
    row["delta_hat_quadratic"] = approx;
    row["theta_eps"] = to_json(res.theta);
    sweep.push_back(std::move(row));
    table += format_double(e) + "," + format_double(err) + "," + (res.converged ? "1" : "0") +
             "," + format_double(exact) + "," + format_double(approx) + "\n";
  }

  json result;
  result["model"] = model_json(*model);
  result["dataset"] = dataset_descriptor(cfg);
  result["fit"] = std::move(fit);
  result["ifa"] = to_json(ifa.ifa);
  result["phi"] = to_json(ifa.phi);
  result["lambda_min"] = ifa.lambda_min;
  result["lambda_max"] = ifa.lambda_max;
  result["damping_used"] = ifa.damping_used;
  result["degenerate_samples"] = index_list(ifa.degenerate_samples);
  result["gradient_sup_norm"] = ifa.gradient_sup_norm;
  result["solve_residual"] = ifa.solve_residual;
  result["tradeoff_quadratic"] = std::move(quad);
  result["eps_sweep"] = std::move(sweep);

  const std::string out = cfg.str("out");
  write_json(out + ".json", envelope(cfg, std::move(result)));
  write_file_atomic(out + "_sweep.csv", table);
  log << "wrote " << out << ".json and " << out << "_sweep.csv\n";
}

// ---------------------------------------------------------- linreg-check

namespace {

json equivalence_json(const EquivalenceReport& r) {
  json j;
  j["b_hat"] = r.b_hat;
  j["lambda_matched"] = r.lambda_matched;
  j["b_lasso"] = r.b_lasso;
  j["discrepancy"] = r.discrepancy;
  j["discrepancy_tolerance"] = r.discrepancy_tolerance;
  j["discrepancy_ok"] = r.discrepancy <= r.discrepancy_tolerance;
  j["b_bound"] = r.b_bound;
  j["bound_satisfied"] = r.bound_satisfied;
  j["l1_optimality"] = r.l1_optimality;
  j["adv_objective_at_optimum"] = r.adv_objective_at_optimum;
  j["adv_objective_at_truth"] = r.adv_objective_at_truth;
  j["truth_identity_value"] = r.truth_identity_value;
  j["lasso_kkt"] = r.lasso_kkt;
  j["solver_converged"] = r.solver_converged;
  j["theta_adv"] = to_json(r.theta_adv);
  j["theta_lasso"] = to_json(r.theta_lasso);
  return j;
}

json recovery_json(const RecoveryBoundReport& r) {
  json j;
  j["error_l2"] = r.error_l2;
  j["tau_hat"] = r.tau_hat;
  j["skipped"] = r.skipped;
  j["bound_l1"] = r.bound_l1;
  j["bound_l1_holds"] = r.bound_l1_holds;
  j["bound_l2"] = r.bound_l2;
  j["bound_l2_holds"] = r.bound_l2_holds;
  j["cone_off_support_l1"] = r.cone_off_support_l1;
  j["cone_on_support_l1"] = r.cone_on_support_l1;
  j["in_cone"] = r.in_cone;
  return j;
}

json weighted_path_json(const WeightedPathReport& r) {
  json j;
  j["epsilon"] = r.epsilon;
  j["q"] = r.q;
  j["tau_hat"] = r.tau_hat;
  j["b_hat_monotone"] = r.b_hat_monotone;
  json pts = json::array();
  for (const auto& p : r.points) {
    json jp;
    jp["xi"] = p.xi;
    jp["alpha"] = p.alpha;
    jp["beta"] = p.beta;
    jp["b_hat"] = p.b_hat;
    jp["b_bound"] = p.b_bound;
    jp["b_bound_holds"] = p.b_bound_holds;
    jp["error_l2"] = p.error_l2;
    jp["bound_xi"] = p.bound_xi;
    jp["bound_xi_holds"] = p.bound_xi_holds;
    jp["bound_sqrt_xi"] = p.bound_sqrt_xi;
    jp["bound_sqrt_xi_holds"] = p.bound_sqrt_xi_holds;
    jp["converged"] = p.converged;
    pts.push_back(std::move(jp));
  }
  j["points"] = std::move(pts);
  return j;
}

}  // namespace

void cmd_linreg_check(RunConfig cfg, std::ostream& log) {
  const NormOrder p = norm_setting(cfg);
  if (!p.is_infinity() && !p.is_two()) throw ConfigError("linreg-check supports p = inf or p = 2");
  const double eps = cfg.number("epsilon");
  if (eps < 0.0) throw ConfigError("setting 'epsilon' must be >= 0");
  const bool divergent = cfg.flag("divergent");
  if (divergent && !cfg.has("n_eval")) cfg.set("n_eval", cfg.str("n"));

  auto gen = generator_from(cfg);
  const Index n = gen.n;
  const Index n_eval = divergent ? cfg.integer("n_eval") : 0;
  if (n_eval < 0) throw ConfigError("n_eval must be >= 0");
  gen.n = n + n_eval;
  const auto full = generate_problem(gen);

  LinRegProblem problem;
  problem.X = full.X.topRows(n);
  problem.Y = full.Y.head(n);
  problem.theta_star = full.theta_star;
  problem.support = full.support;
  problem.realizable = full.realizable;
  if (!problem.realizable) {
    throw PreconditionError("the checks need a realizable problem; set noise_std = 0",
                            gen.noise_std);
  }

  json result;
  json prob;
  prob["n"] = problem.n();
  prob["d"] = problem.d();
  prob["design"] = to_string(gen.design);
  prob["support"] = index_list(problem.support);
  prob["theta_star"] = to_json(*problem.theta_star);
  result["problem"] = std::move(prob);

  double tau = 0.0;
  if (!problem.support.empty()) {
    const auto re = restricted_eigenvalue_estimate(problem.X, problem.support, cfg.number("zeta"),
                                                   static_cast<int>(cfg.integer("re_samples")),
                                                   cfg.unsigned_integer("seed"));
    tau = re.tau_hat;
    json jre;
    jre["tau_hat"] = re.tau_hat;
    jre["support_eigenvalue"] = re.support_eigenvalue;
    jre["sampled_min"] = re.sampled_min;
    jre["certificate"] = to_string(re.certificate);
    result["restricted_eigenvalue"] = std::move(jre);
  }

  if (p.is_infinity()) {
    const auto eq = check_lasso_equivalence(problem, eps);
    result["equivalence"] = equivalence_json(eq);
    result["recovery_bound"] = recovery_json(check_recovery_bound(problem, eq.theta_adv, eps, tau));
  } else {
    const auto sol = solve_adv_linreg(problem.X, problem.Y, eps, 2.0);
    const Vector mn = min_norm_interpolator(problem.X, problem.Y);
    json ridge;
    ridge["theta_adv"] = to_json(sol.theta);
    ridge["distance_to_min_norm_interpolator"] = (sol.theta - mn).norm();
    ridge["objective"] = sol.objective;
    ridge["solver_converged"] = sol.converged;
    result["ridge_limit"] = std::move(ridge);
  }
  result["weighted_path"] = weighted_path_json(weighted_tradeoff_path(problem, eps, p, cfg.numbers("xi_grid"), tau));

  const std::string out = cfg.str("out");
  if (divergent) {
    const Matrix Xe = full.X.bottomRows(n_eval);
    const Vector Ye = full.Y.tail(n_eval);
    const auto div = construct_divergent_interpolators(problem.X, problem.Y, Xe, Ye,
                                                       cfg.number("B"));
    json jd;
    jd["B"] = cfg.number("B");
    jd["scale"] = div.scale;
    jd["train_loss_base"] = div.train_loss_base;
    jd["train_loss"] = div.train_loss;
    jd["train_residual"] = std::sqrt(div.train_loss);
    jd["eval_loss"] = div.eval_loss;
    jd["exceeds_B"] = div.eval_loss > cfg.number("B");
    jd["theta_B"] = to_json(div.theta_B);
    write_json(out + "_theta_B.json", envelope(cfg, jd));
    jd.erase("theta_B");
    jd["file"] = out + "_theta_B.json";
    result["divergent_interpolator"] = std::move(jd);
  }
  write_json(out + ".json", envelope(cfg, std::move(result)));
  log << "wrote " << out << ".json\n";
}

// ------------------------------------------------------------------ entry

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"robtrade: accuracy/robustness trade-off curves, attack influence, and "
               "adversarial linear regression checks"};
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;

  const std::map<std::string, std::string> descriptions = {
      {"gen", "generate a synthetic regression problem or dataset"},
      {"curve", "sweep the xi-weighted objective and write the trade-off curve"},
      {"ifa", "influence of an infinitesimal attack on the fitted parameters"},
      {"linreg-check", "adversarial linear regression vs LASSO/ridge and bound checks"},
  };
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    subs[name] = sub;
    sub->add_option("--config", config_paths[name], "key = value settings file");
    for (const auto& s : settings_for(name)) {
      std::string names = "--" + s.key;
      std::string dashed = s.key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != s.key) names += ",--" + dashed;
      if (s.key == "divergent") names += ",--example2";
      const std::string help =
          s.help + (s.default_value.empty() ? "" : " [default: " + s.default_value + "]");
      if (s.is_flag) {
        options[name][s.key] = sub->add_flag(names, flags[name][s.key], help);
      } else {
        options[name][s.key] = sub->add_option(names, values[name][s.key], help);
      }
    }
  }

  CLI::App* chosen = nullptr;
  try {
    app.parse(argc, argv);
    for (auto& [name, sub] : subs) {
      if (sub->parsed()) chosen = sub;
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    for (auto& [name, sub] : subs) {
      if (sub->parsed()) chosen = sub;
    }
    err << (chosen ? chosen->help() : app.help());
    return kExitConfig;
  }

  const std::string name = chosen->get_name();
  try {
    RunConfig cfg(name);
    if (!config_paths[name].empty()) cfg.merge_file(config_paths[name]);
    for (const auto& s : settings_for(name)) {
      if (options[name][s.key]->count() == 0) continue;
      cfg.set(s.key, s.is_flag ? (flags[name][s.key] ? "true" : "false") : values[name][s.key]);
    }
    if (name == "gen") cmd_gen(cfg, err);
    if (name == "curve") cmd_curve(cfg, err);
    if (name == "ifa") cmd_ifa(cfg, err);
    if (name == "linreg-check") cmd_linreg_check(cfg, err);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n\n" << chosen->help();
    return kExitConfig;
  } catch (const ArgumentError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OptimizationError& e) {
    err << "optimizer failure: " << e.what() << "\n";
    return kExitOptimizer;
  } catch (const StationarityError& e) {
    err << "stationarity failure: " << e.what() << " (gradient sup-norm " << e.measured()
        << ")\n";
    return kExitStationarity;
  } catch (const PreconditionError& e) {
    err << "precondition failure: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const ConstructionImpossibleError& e) {
    err << "precondition failure: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace robtrade::cli

#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "robtrade/io.hpp"

namespace robtrade::cli {

namespace {

const std::string kXiGrid = "0.001,0.25,0.5,0.75,0.999";

std::vector<SettingSpec> data_settings(const std::string& n, const std::string& d,
                                       const std::string& noise) {
  return {
      {"data", "", "CSV dataset (no header, last column = target); generated when empty"},
      {"design", "gaussian", "design law for generated inputs: gaussian | bernoulli"},
      {"n", n, "generated sample count"},
      {"d", d, "generated input dimension"},
      {"noise_std", noise, "target noise of the generator"},
      {"noise_law", "gaussian", "gaussian | rademacher (+-noise_std)"},
      {"signal_scale", "1", "scale of the generating parameters"},
  };
}

std::map<std::string, std::vector<SettingSpec>> build_schema() {
  std::map<std::string, std::vector<SettingSpec>> schema;

  schema["gen"] = {
      {"design", "gaussian", "gaussian | bernoulli"},
      {"n", "", "number of rows (required)"},
      {"d", "", "number of columns (required)"},
      {"s", "", "sparsity of theta*; dense when empty"},
      {"noise_std", "0", "noise added to Y"},
      {"noise_law", "gaussian", "gaussian | rademacher (+-noise_std)"},
      {"signal_scale", "1", "magnitude of the nonzero entries of theta*"},
      {"teacher", "", "empty for a regression problem, or linear | quadnet | logistic"},
      {"quad_a", "1,0.5", "output weights of the quadnet teacher"},
      {"seed", "0", "random seed"},
      {"out", "data", "output prefix; writes <out>.csv and <out>.json"},
  };

  auto curve = data_settings("50", "3", "0.1");
  curve.insert(curve.begin(), {"model", "quadnet", "linear | quadnet | logistic"});
  const std::vector<SettingSpec> curve_rest = {
      {"quad_a", "1,0.5", "quadnet output weights (one per hidden unit)"},
      {"mu", "0.1", "quadnet ridge weight"},
      {"p", "inf", "attack norm: 2, inf, or any p > 1"},
      {"epsilon", "", "attack size; 0.3 for p = 2 and 0.015 otherwise when empty"},
      {"pgd_steps", "20", "projected ascent steps"},
      {"pgd_step_size", "", "projected ascent step; 2.5 epsilon / steps when empty"},
      {"xi_grid", kXiGrid, "comma-separated weights strictly inside (0, 1)"},
      {"inner_solver", "auto", "auto (exact when the model has one) | pgd"},
      {"optimizer", "newton", "newton | gd"},
      {"max_iters", "5000", "outer iteration limit"},
      {"grad_tol", "1e-8", "outer gradient sup-norm tolerance"},
      {"train_fraction", "1", "share of rows used for training; 1 evaluates on the training set"},
      {"seed", "0", "random seed"},
      {"out", "curve", "output prefix"},
  };
  curve.insert(curve.end(), curve_rest.begin(), curve_rest.end());
  schema["curve"] = curve;

  auto ifa = data_settings("50", "3", "0.1");
  ifa.insert(ifa.begin(), {"model", "quadnet", "linear | quadnet | logistic | location"});
  const std::vector<SettingSpec> ifa_rest = {
      {"quad_a", "1,0.5", "quadnet output weights"},
      {"mu", "0.1", "quadnet ridge weight"},
      {"p", "inf", "attack norm"},
      {"epsilon", "", "attack size for the quadratic trade-off estimate; default as in curve"},
      {"inner_solver", "auto", "auto (exact when the model has one) | pgd"},
      {"damping", "0", "initial Hessian damping"},
      {"stationarity_tol", "1e-6", "gradient sup-norm accepted at theta-hat"},
      {"theta", "", "JSON file with theta-hat; fitted in-run when empty"},
      {"eps_sweep", "0.01,0.005", "attack sizes for the retraining check"},
      {"pgd_steps", "60", "projected ascent steps used when retraining"},
      {"pgd_step_scale", "10", "projected ascent step as a multiple of epsilon"},
      {"retrain_tol", "1e-10", "gradient tolerance of the retraining runs"},
      {"retrain_max_iters", "200", "iteration cap of each retraining run"},
      {"seed", "0", "random seed"},
      {"out", "ifa", "output prefix"},
  };
  ifa.insert(ifa.end(), ifa_rest.begin(), ifa_rest.end());
  schema["ifa"] = ifa;

  schema["linreg-check"] = {
      {"design", "gaussian", "gaussian | bernoulli"},
      {"n", "40", "training rows"},
      {"d", "80", "columns"},
      {"s", "5", "sparsity of theta*"},
      {"noise_std", "0", "must stay 0: the checks need Y = X theta*"},
      {"signal_scale", "1", "magnitude of the nonzero entries of theta*"},
      {"p", "inf", "attack norm: inf (LASSO) or 2 (ridge)"},
      {"epsilon", "0.05", "attack size"},
      {"zeta", "1", "cone parameter of the restricted eigenvalue estimate"},
      {"re_samples", "2000", "sampled cone directions"},
      {"xi_grid", kXiGrid, "weights of the xi-weighted sweep"},
      {"divergent", "false", "also build a divergent interpolator (alias --example2)", true},
      {"B", "1e6", "evaluation-loss threshold of the divergent interpolator"},
      {"n_eval", "", "evaluation rows for the divergent interpolator; defaults to n"},
      {"seed", "0", "random seed"},
      {"out", "linreg", "output prefix"},
  };
  return schema;
}

const std::map<std::string, std::vector<SettingSpec>>& schema() {
  static const auto s = build_schema();
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_whole(const std::string& key, const std::string& text, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError("setting '" + key + "': expected " + what + ", got '" + text + "'");
  }
  return value;
}

}  // namespace

const std::vector<SettingSpec>& settings_for(const std::string& command) {
  const auto it = schema().find(command);
  if (it == schema().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"gen", "curve", "ifa", "linreg-check"};
  return names;
}

RunConfig::RunConfig(std::string command) : command_(std::move(command)) {
  for (const auto& s : settings_for(command_)) entries_.emplace_back(s.key, s.default_value);
}

std::pair<std::string, std::string>* RunConfig::find(const std::string& key) {
  for (auto& e : entries_) {
    if (e.first == key) return &e;
  }
  return nullptr;
}

const std::pair<std::string, std::string>* RunConfig::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first == key) return &e;
  }
  return nullptr;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto* e = find(key);
  if (e == nullptr) throw ConfigError("unknown setting '" + key + "' for command " + command_);
  e->second = trim(value);
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (find(key) == nullptr) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown setting '" + key + "'");
    }
    set(key, line.substr(eq + 1));
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  merge_text(text, path.string());
}

bool RunConfig::has(const std::string& key) const { return !str(key).empty(); }

const std::string& RunConfig::str(const std::string& key) const {
  const auto* e = find(key);
  if (e == nullptr) throw ConfigError("unknown setting '" + key + "' for command " + command_);
  return e->second;
}

double RunConfig::number(const std::string& key) const {
  const std::string& text = str(key);
  if (text == "inf") return INFINITY;
  const double v = parse_whole<double>(key, text, "a number");
  if (!std::isfinite(v)) throw ConfigError("setting '" + key + "' must be finite");
  return v;
}

std::int64_t RunConfig::integer(const std::string& key) const {
  return parse_whole<std::int64_t>(key, str(key), "an integer");
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key) const {
  return parse_whole<std::uint64_t>(key, str(key), "a non-negative integer");
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
  throw ConfigError("setting '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(str(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    out.push_back(parse_whole<double>(key, item, "a comma-separated list of numbers"));
  }
  if (out.empty()) throw ConfigError("setting '" + key + "' is empty");
  return out;
}

void RunConfig::require(const std::vector<std::string>& keys) const {
  for (const auto& k : keys) {
    if (!has(k)) throw ConfigError("missing required setting '" + k + "' (--" + k + ")");
  }
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : entries_) j[k] = v;
  return j;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace robtrade::cli

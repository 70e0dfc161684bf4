#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include "cli/cli.hpp"
#include "wavestab/errors.hpp"

namespace wavestab::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) {
  fail(ErrorCode::ConfigError, msg);
}

const json& member(const json& obj, const std::string& where,
                   const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where + ": missing required key '" + key + "'");
  return *it;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) bad(where + ": unknown key '" + it.key() + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) bad(where + " must be finite");
  return x;
}

double number_or(const json& obj, const std::string& where, const char* key,
                 double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where + " must be an integer");
  return v.get<int>();
}

int integer_or(const json& obj, const std::string& where, const char* key,
               int fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : integer(*it, where + "." + key);
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where + " must be a string");
  return v.get<std::string>();
}

ModelSpec parse_model(const json& section) {
  check_keys(section, "model", {"kappa", "W", "kappa_transverse", "alpha_max"});
  std::vector<double> kappa =
      number_list(member(section, "model", "kappa"), "model.kappa");
  std::vector<double> w =
      number_list(member(section, "model", "W"), "model.W");
  std::optional<std::vector<double>> kt;
  if (auto it = section.find("kappa_transverse"); it != section.end())
    kt = number_list(*it, "model.kappa_transverse");
  double alpha_max = number_or(section, "model", "alpha_max", 8.0);
  if (alpha_max <= 0) bad("model.alpha_max must be positive");
  try {
    return make_model(kappa, w, kt, alpha_max);
  } catch (const Error& e) {
    bad(std::string("model section rejected: ") + e.what());
  }
}

WaveSection parse_wave(const json& section) {
  check_keys(section, "wave", {"params", "regime", "seed"});
  WaveSection wave;
  bool has_params = section.contains("params");
  bool has_regime = section.contains("regime");
  if (has_params == has_regime)
    bad("wave: exactly one of 'params' and 'regime' must be present");
  if (has_params) {
    const json& p = section["params"];
    check_keys(p, "wave.params", {"mu_x", "c_x", "omega_phi", "mu_phi"});
    WaveParams params;
    params.mu_x = number(member(p, "wave.params", "mu_x"), "wave.params.mu_x");
    params.c_x = number(member(p, "wave.params", "c_x"), "wave.params.c_x");
    params.omega_phi = number(member(p, "wave.params", "omega_phi"),
                              "wave.params.omega_phi");
    params.mu_phi =
        number(member(p, "wave.params", "mu_phi"), "wave.params.mu_phi");
    wave.params = params;
  } else {
    const json& r = section["regime"];
    check_keys(r, "wave.regime", {"c_x", "rho0", "k_phi", "epsilon", "side"});
    RegimeSpec spec;
    spec.c_x = number(member(r, "wave.regime", "c_x"), "wave.regime.c_x");
    spec.rho0 = number(member(r, "wave.regime", "rho0"), "wave.regime.rho0");
    spec.k_phi =
        number(member(r, "wave.regime", "k_phi"), "wave.regime.k_phi");
    spec.epsilon =
        number(member(r, "wave.regime", "epsilon"), "wave.regime.epsilon");
    std::string side =
        text(member(r, "wave.regime", "side"), "wave.regime.side");
    if (side == "solitary") {
      spec.solitary = true;
    } else if (side != "harmonic") {
      bad("wave.regime.side must be 'harmonic' or 'solitary'");
    }
    if (spec.rho0 <= 0) bad("wave.regime.rho0 must be positive");
    if (spec.epsilon <= 0) bad("wave.regime.epsilon must be positive");
    if (spec.solitary && spec.epsilon >= 1)
      bad("wave.regime.epsilon must lie in (0, 1) on the solitary side");
    wave.regime = spec;
  }
  if (auto it = section.find("seed"); it != section.end()) {
    std::vector<double> seed = number_list(*it, "wave.seed");
    if (seed.size() != 2 || seed[0] >= seed[1])
      bad("wave.seed must be [lo, hi] with lo < hi");
    wave.seed = std::make_pair(seed[0], seed[1]);
  }
  return wave;
}

NumericsSection parse_numerics(const json& section) {
  check_keys(section, "numerics",
             {"n_points", "quadrature_order", "fd_step", "tolerance",
              "lambda_ceiling", "directions"});
  NumericsSection num;
  num.n_points = integer_or(section, "numerics", "n_points", num.n_points);
  num.quadrature_order =
      integer_or(section, "numerics", "quadrature_order", num.quadrature_order);
  num.fd_step = number_or(section, "numerics", "fd_step", num.fd_step);
  num.tolerance = number_or(section, "numerics", "tolerance", num.tolerance);
  num.lambda_ceiling =
      number_or(section, "numerics", "lambda_ceiling", num.lambda_ceiling);
  num.directions = integer_or(section, "numerics", "directions", num.directions);
  if (num.n_points < 16) bad("numerics.n_points must be at least 16");
  if (num.quadrature_order < 16)
    bad("numerics.quadrature_order must be at least 16");
  if (num.fd_step <= 0) bad("numerics.fd_step must be positive");
  if (num.tolerance <= 0) bad("numerics.tolerance must be positive");
  if (num.lambda_ceiling <= 0) bad("numerics.lambda_ceiling must be positive");
  if (num.directions < 8) bad("numerics.directions must be at least 8");
  return num;
}

OutputsSection parse_outputs(const json& section) {
  check_keys(section, "outputs",
             {"profile_csv", "summary_json", "report_json", "evans_csv",
              "scan_csv"});
  OutputsSection out;
  auto assign = [&](const char* key, std::string& slot) {
    if (auto it = section.find(key); it != section.end()) {
      slot = text(*it, std::string("outputs.") + key);
      if (slot.empty()) bad(std::string("outputs.") + key + " must be nonempty");
    }
  };
  assign("profile_csv", out.profile_csv);
  assign("summary_json", out.summary_json);
  assign("report_json", out.report_json);
  assign("evans_csv", out.evans_csv);
  assign("scan_csv", out.scan_csv);
  return out;
}

EvansScanSection parse_evans_scan(const json& section) {
  check_keys(section, "evans_scan",
             {"xi", "eta_sq", "lambda_from", "lambda_to", "count"});
  EvansScanSection scan;
  if (auto it = section.find("xi"); it != section.end())
    scan.xi = number_list(*it, "evans_scan.xi");
  if (auto it = section.find("eta_sq"); it != section.end())
    scan.eta_sq = number_list(*it, "evans_scan.eta_sq");
  scan.lambda_from = number(member(section, "evans_scan", "lambda_from"),
                            "evans_scan.lambda_from");
  scan.lambda_to = number(member(section, "evans_scan", "lambda_to"),
                          "evans_scan.lambda_to");
  scan.count = integer(member(section, "evans_scan", "count"),
                       "evans_scan.count");
  if (scan.xi.empty()) bad("evans_scan.xi must be nonempty");
  if (scan.eta_sq.empty()) bad("evans_scan.eta_sq must be nonempty");
  for (double e : scan.eta_sq)
    if (e < 0) bad("evans_scan.eta_sq entries must be nonnegative");
  if (scan.count < 2) bad("evans_scan.count must be at least 2");
  if (!(scan.lambda_to > scan.lambda_from))
    bad("evans_scan.lambda_to must exceed evans_scan.lambda_from");
  return scan;
}

ScanSection parse_scan(const json& section, const WaveSection& wave) {
  check_keys(section, "scan", {"axis", "values", "from", "to", "count", "grid"});
  ScanSection scan;
  bool has_grid = section.contains("grid");
  bool has_axis = section.contains("axis");
  if (has_grid == has_axis)
    bad("scan: exactly one of 'axis' and 'grid' must be present");
  if (has_grid) {
    scan.grid_mode = true;
    const json& g = section["grid"];
    check_keys(g, "scan.grid", {"c_x", "rho0", "k_phi"});
    scan.grid_c_x = number_list(member(g, "scan.grid", "c_x"), "scan.grid.c_x");
    scan.grid_rho0 =
        number_list(member(g, "scan.grid", "rho0"), "scan.grid.rho0");
    scan.grid_k_phi =
        number_list(member(g, "scan.grid", "k_phi"), "scan.grid.k_phi");
    if (scan.grid_c_x.empty() || scan.grid_rho0.empty() ||
        scan.grid_k_phi.empty())
      bad("scan.grid lists must be nonempty");
    for (double r : scan.grid_rho0)
      if (r <= 0) bad("scan.grid.rho0 entries must be positive");
    return scan;
  }
  scan.axis = text(section["axis"], "scan.axis");
  static const std::set<std::string> axes = {"mu_x", "c_x", "omega_phi",
                                             "mu_phi", "epsilon"};
  if (!axes.count(scan.axis))
    bad("scan.axis must be one of mu_x, c_x, omega_phi, mu_phi, epsilon");
  if (scan.axis == "epsilon" && !wave.regime)
    bad("scan.axis 'epsilon' requires wave.regime");
  bool has_values = section.contains("values");
  bool has_range = section.contains("from") || section.contains("to") ||
                   section.contains("count");
  if (has_values == has_range)
    bad("scan: exactly one of 'values' and 'from'/'to'/'count' must be present");
  if (has_values) {
    scan.values = number_list(section["values"], "scan.values");
    if (scan.values.empty()) bad("scan.values must be nonempty");
  } else {
    double from = number(member(section, "scan", "from"), "scan.from");
    double to = number(member(section, "scan", "to"), "scan.to");
    int count = integer(member(section, "scan", "count"), "scan.count");
    if (count < 1) bad("scan.count must be at least 1");
    scan.values.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
      double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      scan.values.push_back(from + (to - from) * t);
    }
  }
  if (scan.axis == "epsilon") {
    for (double v : scan.values)
      if (v <= 0 || (wave.regime->solitary && v >= 1))
        bad("scan values for axis 'epsilon' must lie in the regime range");
  }
  return scan;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    bad("config is not valid JSON: " + std::string(e.what()));
  }
  check_keys(root, "config",
             {"model", "wave", "numerics", "outputs", "evans_scan", "scan"});

  RunConfig config;
  config.model = parse_model(member(root, "config", "model"));
  config.wave = parse_wave(member(root, "config", "wave"));
  if (auto it = root.find("numerics"); it != root.end())
    config.numerics = parse_numerics(*it);
  if (auto it = root.find("outputs"); it != root.end())
    config.outputs = parse_outputs(*it);
  if (auto it = root.find("evans_scan"); it != root.end())
    config.evans_scan = parse_evans_scan(*it);
  if (auto it = root.find("scan"); it != root.end())
    config.scan = parse_scan(*it, config.wave);
  return config;
}

}  // namespace wavestab::cli

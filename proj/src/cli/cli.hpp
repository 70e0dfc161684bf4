#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavestab/model.hpp"
#include "wavestab/profile.hpp"

namespace wavestab::cli {

// Small-amplitude or near-solitary wave selected by distance from the
// boundary of the existence region instead of explicit parameters.
struct RegimeSpec {
  double c_x = 0.0;
  double rho0 = 0.0;
  double k_phi = 0.0;
  double epsilon = 0.0;
  bool solitary = false;  // "side": harmonic | solitary
};

struct WaveSection {
  std::optional<WaveParams> params;
  std::optional<RegimeSpec> regime;
  // well-branch selector forwarded to the profile solver when several
  // wells coexist
  std::optional<std::pair<double, double>> seed;
};

struct NumericsSection {
  int n_points = 512;          // profile output grid
  int quadrature_order = 256;  // averaging grid used by stability runs
  double fd_step = 1e-4;       // relative Hessian step
  double tolerance = 1e-8;     // regime inversion tolerance
  double lambda_ceiling = 500.0;
  int directions = 720;  // transverse half-circle samples
};

struct OutputsSection {
  std::string profile_csv = "profile.csv";
  std::string summary_json = "summary.json";
  std::string report_json = "report.json";
  std::string evans_csv = "evans.csv";
  std::string scan_csv = "scan.csv";
};

// Optional Evans-function sampling attached to a stability run: values of
// D_xi(lambda, eta^2) on a real-lambda grid, one CSV row per sample.
struct EvansScanSection {
  std::vector<double> xi{0.0};
  std::vector<double> eta_sq{0.0};
  double lambda_from = 0.0;
  double lambda_to = 0.0;
  int count = 0;
};

// Either a one-axis sweep of the wave parameters (axis mode) or a
// cartesian grid of boundary points for the asymptotic indices (grid
// mode); exactly one is populated.
struct ScanSection {
  std::string axis;  // mu_x | c_x | omega_phi | mu_phi | epsilon
  std::vector<double> values;
  std::vector<double> grid_c_x, grid_rho0, grid_k_phi;
  bool grid_mode = false;
};

struct RunConfig {
  ModelSpec model;
  WaveSection wave;
  NumericsSection numerics;
  OutputsSection outputs;
  std::optional<EvansScanSection> evans_scan;
  std::optional<ScanSection> scan;
};

// Parses and validates a JSON config file. Every structural problem
// (unreadable file, syntax error, unknown key, wrong type, missing
// section, both or neither of params/regime, empty scan grid, ...)
// raises Error(ConfigError).
RunConfig load_config(const std::string& path);

struct RunOptions {
  std::string out_dir;
  int threads = 1;
  bool timestamp = true;
};

int run_profile(const RunConfig& config, const RunOptions& options);
int run_stability(const RunConfig& config, const RunOptions& options);
int run_scan(const RunConfig& config, const RunOptions& options);

}  // namespace wavestab::cli

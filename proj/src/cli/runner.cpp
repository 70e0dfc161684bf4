#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "cli/cli.hpp"
#include "cli/serialize.hpp"
#include "wavestab/action.hpp"
#include "wavestab/asymptotics.hpp"
#include "wavestab/errors.hpp"
#include "wavestab/modulation.hpp"
#include "wavestab/spectral.hpp"

namespace wavestab::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Wave selection resolved to explicit parameters plus the solver hints
// (well-branch seed, pinned Hessian step) the regime asymptotics provide.
struct ResolvedWave {
  WaveParams params;
  std::optional<std::pair<double, double>> seed;
  std::optional<double> pinned_step;
  std::optional<RegimeSpec> regime;
  double mu_x_boundary = kNaN;
};

ResolvedWave resolve_wave(const ModelSpec& model, const WaveSection& wave,
                          const NumericsSection& numerics) {
  ResolvedWave out;
  out.seed = wave.seed;
  if (wave.params) {
    out.params = *wave.params;
    return out;
  }
  const RegimeSpec& regime = *wave.regime;
  out.regime = regime;
  if (!regime.solitary) {
    HarmonicPoint hp =
        harmonic_point(model, regime.c_x, regime.rho0, regime.k_phi);
    out.params = WaveParams{hp.mu_x0 + regime.epsilon * regime.epsilon,
                            regime.c_x, hp.omega_phi0, hp.mu_phi0};
    out.mu_x_boundary = hp.mu_x0;
  } else {
    WaveParams saddle =
        saddle_params(model, regime.c_x, regime.rho0, regime.k_phi);
    SolitaryData sol =
        solitary_action(model, regime.c_x, regime.rho0, regime.k_phi);
    if (!out.seed)
      out.seed = std::make_pair(std::min(sol.rho_s, regime.rho0),
                                std::max(sol.rho_s, regime.rho0));
    double mu = mu_x_for_epsilon(model, saddle, regime.epsilon,
                                 numerics.tolerance, out.seed);
    out.params = WaveParams{mu, saddle.c_x, saddle.omega_phi, saddle.mu_phi};
    out.mu_x_boundary = saddle.mu_x;
  }
  // an eighth of the distance to the degenerate member keeps every
  // stencil point inside the existence region with truncation error well
  // under the finite-difference noise gate
  out.pinned_step = std::abs(out.mu_x_boundary - out.params.mu_x) / 8.0;
  return out;
}

Verdict combine(std::initializer_list<Verdict> verdicts) {
  bool inconclusive = false, candidate = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::Unstable) return Verdict::Unstable;
    if (v == Verdict::Inconclusive) inconclusive = true;
    if (v == Verdict::StableCandidate) candidate = true;
  }
  return (inconclusive || !candidate) ? Verdict::Inconclusive
                                      : Verdict::StableCandidate;
}

// profile -> action -> modulation -> every criterion, over shared data.
struct StabilityBundle {
  WaveProfile profile;
  Averages averages;
  ActionData action;
  ModulationData data;
  CoperiodicReport coperiodic;
  SidebandReport sideband;
  TransverseReport transverse;
  SplittingReport splitting;
  Verdict overall = Verdict::Inconclusive;
};

StabilityBundle analyze(const ModelSpec& model, const ResolvedWave& wave,
                        const NumericsSection& numerics) {
  StabilityBundle b;
  b.profile = solve_profile(model, wave.params, numerics.quadrature_order,
                            wave.seed);
  b.averages = wave_averages(model, b.profile);
  HessianOptions options;
  options.fd_step = numerics.fd_step;
  options.seed = wave.seed;
  if (wave.pinned_step && *wave.pinned_step > 0)
    options.component_steps = Eigen::Vector4d::Constant(*wave.pinned_step);
  b.action = action_hessian(model, wave.params, options);
  b.data = assemble(b.action.hess, b.averages, b.profile.k_x);
  b.coperiodic = coperiodic_criterion(b.action.hess);
  b.sideband =
      characteristic_speeds(b.action.hess, b.profile.k_x, wave.params.c_x);
  b.transverse = transverse_criteria(b.data, numerics.directions);
  b.splitting = splitting_criteria(b.data, b.action.hess, b.profile.k_x);
  b.overall = combine({b.coperiodic.verdict, b.sideband.verdict,
                       b.transverse.xi0.verdict, b.transverse.full.verdict,
                       b.splitting.eta0.verdict, b.splitting.xi0.verdict});
  return b;
}

double max_imag(const std::array<Complex, 4>& speeds) {
  double m = 0.0;
  for (const Complex& s : speeds) m = std::max(m, std::abs(s.imag()));
  return m;
}

void emit_model(JsonWriter& w, const ModelSpec& model) {
  w.key("model").begin_object();
  w.key("kappa").begin_array();
  for (Eigen::Index i = 0; i < model.kappa.size(); ++i)
    w.value(model.kappa[i]);
  w.end_array();
  w.key("W").begin_array();
  for (Eigen::Index i = 0; i < model.W.size(); ++i) w.value(model.W[i]);
  w.end_array();
  if (model.has_transverse()) {
    w.key("kappa_transverse").begin_array();
    for (Eigen::Index i = 0; i < model.kappa_transverse.size(); ++i)
      w.value(model.kappa_transverse[i]);
    w.end_array();
  }
  w.kv("alpha_max", model.alpha_max);
  w.end_object();
}

void emit_params(JsonWriter& w, const WaveParams& p) {
  w.key("parameters").begin_object();
  w.kv("mu_x", p.mu_x);
  w.kv("c_x", p.c_x);
  w.kv("omega_phi", p.omega_phi);
  w.kv("mu_phi", p.mu_phi);
  w.end_object();
}

void emit_regime(JsonWriter& w, const ResolvedWave& wave) {
  if (!wave.regime) return;
  const RegimeSpec& r = *wave.regime;
  w.key("regime").begin_object();
  w.kv("side", r.solitary ? "solitary" : "harmonic");
  w.kv("c_x", r.c_x);
  w.kv("rho0", r.rho0);
  w.kv("k_phi", r.k_phi);
  w.kv("epsilon", r.epsilon);
  w.kv("mu_x_boundary", wave.mu_x_boundary);
  w.end_object();
}

void emit_averages(JsonWriter& w, const Averages& a) {
  w.key("averages").begin_object();
  w.kv("m_bar", a.m_bar);
  w.kv("q_bar", a.q_bar);
  w.kv("sigma1", a.sigma1);
  w.kv("sigma2", a.sigma2);
  w.kv("sigma3", a.sigma3);
  w.kv("tau0", a.tau0);
  w.kv("tau1", a.tau1);
  w.kv("tau2", a.tau2);
  w.kv("tau3", a.tau3);
  w.end_object();
}

void emit_complex(JsonWriter& w, const Complex& z) {
  w.begin_object();
  w.kv("re", z.real());
  w.kv("im", z.imag());
  w.end_object();
}

void emit_speeds(JsonWriter& w, const std::array<Complex, 4>& speeds) {
  w.key("char_speeds").begin_array();
  for (const Complex& s : speeds) emit_complex(w, s);
  w.end_array();
}

void emit_witness(JsonWriter& w, const TransverseWitness& t) {
  w.begin_object();
  w.kv("xi", t.xi);
  w.kv("zeta", t.zeta);
  w.kv("lambda_re", t.lambda.real());
  w.kv("lambda_im", t.lambda.imag());
  w.end_object();
}

fs::path prepare_out_dir(const RunOptions& options) {
  fs::path dir(options.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    fail(ErrorCode::ConfigError,
         "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void set_axis(WaveParams& p, const std::string& axis, double v) {
  if (axis == "mu_x") {
    p.mu_x = v;
  } else if (axis == "c_x") {
    p.c_x = v;
  } else if (axis == "omega_phi") {
    p.omega_phi = v;
  } else {
    p.mu_phi = v;
  }
}

// One stability summary row; failures land in the trailing column and
// never abort the sweep.
std::string axis_row(const RunConfig& config, const ResolvedWave* base,
                     int index, double v) {
  const ScanSection& scan = *config.scan;
  const bool epsilon_axis = scan.axis == "epsilon";
  std::vector<std::string> f;
  f.push_back(std::to_string(index));

  ResolvedWave wave;
  double epsilon = kNaN;
  std::string error;
  bool have_wave = false;
  try {
    if (epsilon_axis) {
      WaveSection section = config.wave;
      section.regime->epsilon = v;
      wave = resolve_wave(config.model, section, config.numerics);
      epsilon = v;
    } else {
      wave = *base;
      set_axis(wave.params, scan.axis, v);
      if (wave.regime) {
        if (scan.axis == "mu_x") {
          double gap = std::abs(wave.mu_x_boundary - v);
          wave.pinned_step =
              gap > 0 ? std::optional<double>(gap / 8.0) : std::nullopt;
        } else {
          epsilon = wave.regime->epsilon;
        }
      }
    }
    have_wave = true;
    StabilityBundle b = analyze(config.model, wave, config.numerics);
    f.push_back(fmt17(epsilon));
    for (int i = 0; i < 4; ++i) f.push_back(fmt17(wave.params[i]));
    f.push_back(fmt17(b.profile.X_x));
    f.push_back(fmt17(b.profile.k_x));
    f.push_back(fmt17(b.profile.rho_min));
    f.push_back(fmt17(b.profile.rho_max));
    f.push_back(fmt17(b.action.theta));
    f.push_back(fmt17(b.action.hess.determinant()));
    f.push_back(std::to_string(b.coperiodic.negative_signature));
    f.push_back(to_string(b.coperiodic.verdict));
    f.push_back(b.sideband.weakly_hyperbolic ? "true" : "false");
    f.push_back(fmt17(max_imag(b.sideband.char_speeds)));
    f.push_back(to_string(b.sideband.verdict));
    f.push_back(to_string(b.transverse.xi0.verdict));
    f.push_back(to_string(b.transverse.full.verdict));
    f.push_back(fmt17(b.transverse.full.max_re));
    f.push_back(to_string(b.overall));
    f.push_back("");
    return csv_row(f);
  } catch (const std::exception& e) {
    error = e.what();
  }
  f.push_back(fmt17(epsilon));
  for (int i = 0; i < 4; ++i)
    f.push_back(have_wave || !epsilon_axis ? fmt17(wave.params[i])
                                           : fmt17(kNaN));
  for (int i = 0; i < 6; ++i) f.push_back(fmt17(kNaN));
  f.push_back("");  // negative_signature
  f.push_back("");  // coperiodic
  f.push_back("");  // weakly_hyperbolic
  f.push_back(fmt17(kNaN));
  f.push_back("");  // sideband
  f.push_back("");  // transverse_xi0
  f.push_back("");  // transverse_full
  f.push_back(fmt17(kNaN));
  f.push_back("");  // overall
  f.push_back(error);
  return csv_row(f);
}

// Boundary-point indices: constant state, harmonic indices when the
// effective potential has a minimum, solitary indices when it has a
// saddle. The absent side is skipped silently; anything else is an error.
std::string grid_row(const ModelSpec& model, int index, double c_x,
                     double rho0, double k_phi) {
  double delta_hyp = kNaN, delta_bf = kNaN, a0 = kNaN, x0 = kNaN;
  double mu_x0 = kNaN, vk = kNaN, theta_s = kNaN, rho_s = kNaN;
  std::string constant_state, error;
  try {
    ConstantStateReport cs = constant_state_check(model, rho0, k_phi);
    constant_state = cs.verdict();
    delta_hyp = cs.delta_hyp;
    mu_x0 = saddle_params(model, c_x, rho0, k_phi).mu_x;
  } catch (const Error& e) {
    error = e.what();
  }
  if (error.empty()) {
    try {
      HarmonicPoint hp = harmonic_point(model, c_x, rho0, k_phi);
      delta_bf = hp.delta_BF;
      a0 = hp.a0;
      x0 = hp.X0;
    } catch (const NotAMinimumError&) {
      // saddle side; handled below
    } catch (const Error& e) {
      error = e.what();
    }
    try {
      SolitaryData sol = solitary_action(model, c_x, rho0, k_phi);
      rho_s = sol.rho_s;
      theta_s = sol.theta_s;
      vk = vk_index(model, c_x, rho0, k_phi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolitaryWave && error.empty())
        error = e.what();
    }
  }
  return csv_row({std::to_string(index), fmt17(c_x), fmt17(rho0),
                  fmt17(k_phi), fmt17(delta_hyp), constant_state,
                  fmt17(mu_x0), fmt17(delta_bf), fmt17(a0), fmt17(x0),
                  fmt17(vk), fmt17(theta_s), fmt17(rho_s), error});
}

void run_pool(int threads, std::vector<std::string>& lines,
              const std::function<std::string(int)>& compute) {
  const int n = static_cast<int>(lines.size());
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
      lines[static_cast<size_t>(i)] = compute(i);
  };
  const int nt = std::clamp(threads, 1, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nt - 1));
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
}

}  // namespace

int run_profile(const RunConfig& config, const RunOptions& options) {
  fs::path out_dir = prepare_out_dir(options);
  ResolvedWave wave = resolve_wave(config.model, config.wave, config.numerics);
  WaveProfile profile = solve_profile(config.model, wave.params,
                                      config.numerics.n_points, wave.seed);
  Averages averages = wave_averages(config.model, profile);

  std::string csv = "x,rho,v,theta,V1,V2\n";
  for (Eigen::Index i = 0; i < profile.x_grid.size(); ++i) {
    csv += csv_row({fmt17(profile.x_grid[i]), fmt17(profile.rho[i]),
                    fmt17(profile.v[i]), fmt17(profile.theta[i]),
                    fmt17(profile.V(0, i)), fmt17(profile.V(1, i))});
  }
  write_file(out_dir / config.outputs.profile_csv, csv);

  JsonWriter w;
  w.begin_object();
  w.kv("command", "profile");
  emit_model(w, config.model);
  emit_params(w, wave.params);
  emit_regime(w, wave);
  w.kv("X_x", profile.X_x);
  w.kv("xi_phi", profile.xi_phi);
  w.kv("k_x", profile.k_x);
  w.kv("k_phi", profile.k_phi);
  w.kv("omega_x", profile.omega_x);
  w.kv("rho_min", profile.rho_min);
  w.kv("rho_max", profile.rho_max);
  emit_averages(w, averages);
  w.kv("n_points", config.numerics.n_points);
  if (options.timestamp) w.kv("generated_at", iso8601_utc_now());
  w.end_object();
  write_file(out_dir / config.outputs.summary_json, w.str() + "\n");
  return 0;
}

int run_stability(const RunConfig& config, const RunOptions& options) {
  fs::path out_dir = prepare_out_dir(options);
  ResolvedWave wave = resolve_wave(config.model, config.wave, config.numerics);
  StabilityBundle b = analyze(config.model, wave, config.numerics);

  JsonWriter w;
  w.begin_object();
  w.kv("command", "stability");
  emit_model(w, config.model);
  emit_params(w, wave.params);
  emit_regime(w, wave);

  w.key("wave").begin_object();
  w.kv("X_x", b.profile.X_x);
  w.kv("xi_phi", b.profile.xi_phi);
  w.kv("k_x", b.profile.k_x);
  w.kv("k_phi", b.profile.k_phi);
  w.kv("omega_x", b.profile.omega_x);
  w.kv("rho_min", b.profile.rho_min);
  w.kv("rho_max", b.profile.rho_max);
  w.end_object();

  emit_averages(w, b.averages);

  w.key("action").begin_object();
  w.kv("theta", b.action.theta);
  w.key("gradient").begin_array();
  for (int i = 0; i < 4; ++i) w.value(b.action.grad[i]);
  w.end_array();
  w.key("hessian").begin_array();
  for (int i = 0; i < 4; ++i) {
    w.begin_array();
    for (int j = 0; j < 4; ++j) w.value(b.action.hess(i, j));
    w.end_array();
  }
  w.end_array();
  w.kv("det_hess", b.action.hess.determinant());
  w.kv("fd_step", b.action.fd_step);
  w.kv("est_error_max", b.action.est_error.maxCoeff());
  w.end_object();

  w.key("delta").begin_array();
  for (const auto& [key, value] : b.data.delta) {
    w.begin_object();
    w.kv("m", key[0]);
    w.kv("n", key[1]);
    w.kv("p", key[2]);
    w.kv("value", value);
    w.end_object();
  }
  w.end_array();

  w.key("coperiodic").begin_object();
  w.kv("det", b.coperiodic.det);
  w.kv("det_sign", b.coperiodic.det_sign);
  w.kv("negative_signature", b.coperiodic.negative_signature);
  w.kv("verdict", to_string(b.coperiodic.verdict));
  w.end_object();

  w.key("sideband").begin_object();
  emit_speeds(w, b.sideband.char_speeds);
  w.kv("weakly_hyperbolic", b.sideband.weakly_hyperbolic);
  w.kv("verdict", to_string(b.sideband.verdict));
  w.end_object();

  w.key("transverse_xi0").begin_object();
  w.kv("delta400", b.transverse.xi0.delta400);
  w.kv("delta301", b.transverse.xi0.delta301);
  w.kv("delta202", b.transverse.xi0.delta202);
  w.kv("inequalities_hold", b.transverse.xi0.inequalities_hold);
  w.kv("verdict", to_string(b.transverse.xi0.verdict));
  w.end_object();

  w.key("transverse_full").begin_object();
  w.kv("max_re", b.transverse.full.max_re);
  w.key("worst");
  emit_witness(w, b.transverse.full.worst);
  const auto& unstable = b.transverse.full.unstable_directions;
  w.kv("n_unstable_directions", static_cast<int>(unstable.size()));
  w.key("unstable_directions").begin_array();
  for (size_t i = 0; i < unstable.size() && i < 16; ++i)
    emit_witness(w, unstable[i]);
  w.end_array();
  w.kv("verdict", to_string(b.transverse.full.verdict));
  w.end_object();

  w.key("splitting").begin_object();
  w.key("eta0").begin_object();
  w.kv("verdict", to_string(b.splitting.eta0.verdict));
  w.kv("omega0", b.splitting.eta0.omega0);
  w.kv("multiplicity", b.splitting.eta0.multiplicity);
  w.kv("numerator", b.splitting.eta0.numerator);
  w.kv("denominator", b.splitting.eta0.denominator);
  w.end_object();
  w.key("xi0").begin_object();
  w.kv("verdict", to_string(b.splitting.xi0.verdict));
  w.kv("discriminant_gap", b.splitting.xi0.discriminant_gap);
  w.kv("quantity", b.splitting.xi0.quantity);
  w.end_object();
  w.end_object();

  w.kv("overall", to_string(b.overall));
  if (options.timestamp) w.kv("generated_at", iso8601_utc_now());
  w.end_object();
  write_file(out_dir / config.outputs.report_json, w.str() + "\n");

  if (config.evans_scan) {
    const EvansScanSection& es = *config.evans_scan;
    EvansFunction ev(config.model, wave.params);
    ev.lambda_ceiling = config.numerics.lambda_ceiling;
    std::string csv = "xi,eta_sq,lambda_re,lambda_im,evans_re,evans_im,evans_abs\n";
    for (double xi : es.xi) {
      for (double eta_sq : es.eta_sq) {
        for (int i = 0; i < es.count; ++i) {
          double t = static_cast<double>(i) / (es.count - 1);
          Complex lambda(es.lambda_from + (es.lambda_to - es.lambda_from) * t,
                         0.0);
          Complex d = ev(xi, lambda, eta_sq);
          csv += csv_row({fmt17(xi), fmt17(eta_sq), fmt17(lambda.real()),
                          fmt17(lambda.imag()), fmt17(d.real()),
                          fmt17(d.imag()), fmt17(std::abs(d))});
        }
      }
    }
    write_file(out_dir / config.outputs.evans_csv, csv);
  }
  return 0;
}

int run_scan(const RunConfig& config, const RunOptions& options) {
  if (!config.scan)
    fail(ErrorCode::ConfigError, "scan command requires a 'scan' section");
  fs::path out_dir = prepare_out_dir(options);
  const ScanSection& scan = *config.scan;

  std::string header;
  std::vector<std::string> lines;
  if (scan.grid_mode) {
    header =
        "index,c_x,rho0,k_phi,delta_hyp,constant_state,mu_x0,delta_BF,a0,X0,"
        "vk_index,theta_s,rho_s,error\n";
    struct Point {
      double c_x, rho0, k_phi;
    };
    std::vector<Point> points;
    for (double c : scan.grid_c_x)
      for (double r : scan.grid_rho0)
        for (double k : scan.grid_k_phi) points.push_back({c, r, k});
    lines.resize(points.size());
    run_pool(options.threads, lines, [&](int i) {
      const Point& p = points[static_cast<size_t>(i)];
      return grid_row(config.model, i, p.c_x, p.rho0, p.k_phi);
    });
  } else {
    header =
        "index,epsilon,mu_x,c_x,omega_phi,mu_phi,X_x,k_x,rho_min,rho_max,"
        "theta,det_hess,negative_signature,coperiodic,weakly_hyperbolic,"
        "max_speed_im,sideband,transverse_xi0,transverse_full,max_re,overall,"
        "error\n";
    ResolvedWave base;
    if (scan.axis != "epsilon")
      base = resolve_wave(config.model, config.wave, config.numerics);
    lines.resize(scan.values.size());
    run_pool(options.threads, lines, [&](int i) {
      return axis_row(config, &base, i, scan.values[static_cast<size_t>(i)]);
    });
  }

  std::string csv = header;
  for (const std::string& line : lines) csv += line;
  write_file(out_dir / config.outputs.scan_csv, csv);
  return 0;
}

}  // namespace wavestab::cli

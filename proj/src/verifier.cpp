#include "hyplab/verifier.hpp"

#include "hyplab/elliptic.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/halfspace.hpp"
#include "hyplab/iwasawa.hpp"
#include "hyplab/polar_field.hpp"
#include "hyplab/radial.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hyplab {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

CheckRow make_row(std::string id, double r, double expected, double observed, double tol) {
  CheckRow row;
  row.check_id = std::move(id);
  row.param_r = r;
  row.expected = expected;
  row.observed = observed;
  row.abs_err = std::abs(observed - expected);
  if (expected != 0.0) {
    row.rel_err = row.abs_err / std::abs(expected);
  } else {
    row.rel_err = row.abs_err == 0.0 ? 0.0 : kInf;
  }
  if (std::isnan(row.abs_err)) row.rel_err = row.abs_err;
  row.tol = tol;
  return row;
}

std::string with_suffix(const std::string& base, const std::string& suffix) {
  return base + "/" + suffix;
}

std::string c_label(double C) { return "C=" + format_number(C); }

SolverParams solver_params(const CampaignConfig& cfg) {
  SolverParams p;
  p.tol = cfg.tolerance("residual", 1e-10);
  const std::string scheme = cfg.scheme.value_or("newton");
  if (scheme == "gauss-seidel") {
    p.scheme = IterationScheme::kGaussSeidel;
  } else if (scheme == "picard") {
    p.scheme = IterationScheme::kPicard;
  } else {
    p.scheme = IterationScheme::kNewton;
  }
  p.damping = cfg.damping.value_or(0.7);
  return p;
}

FluxLaw config_law(const CampaignConfig& cfg, const std::string& fallback) {
  return FluxLaw::from_name(cfg.law.value_or(fallback), cfg.p.value_or(3.0));
}

std::pair<double, double> annulus_radii(const CampaignConfig& cfg) {
  if (!cfg.radii) return {1.0, 2.0};
  const auto& r = *cfg.radii;
  if (r.size() < 2) throw ConfigError("annulus campaigns need two radii");
  return {r.front(), r.back()};
}

// Runs one check body; exceptions from the library become failed rows.
void guarded(VerificationReport& rep, const std::string& id, double r,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const NoSolution& e) {
    rep.add_failure(id, r, std::string("NoSolution: ") + e.what());
  } catch (const NotConverged& e) {
    rep.add_failure(id, r, std::string("NotConverged: ") + e.what());
  } catch (const std::exception& e) {
    rep.add_failure(id, r, e.what());
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// Low-order trigonometric boundary data with seeded coefficients.
struct RingSeries {
  double mean{0};
  std::vector<double> a, b;
  double operator()(double theta) const {
    double v = mean;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double m = static_cast<double>(k + 1);
      v += a[k] * std::cos(m * theta) + b[k] * std::sin(m * theta);
    }
    return v;
  }
};

RingSeries random_series(std::mt19937_64& rng, double amplitude, int modes) {
  RingSeries s;
  s.mean = amplitude * (2.0 * uniform01(rng) - 1.0);
  for (int k = 1; k <= modes; ++k) {
    s.a.push_back(amplitude * (2.0 * uniform01(rng) - 1.0) / (2.0 * k));
    s.b.push_back(amplitude * (2.0 * uniform01(rng) - 1.0) / (2.0 * k));
  }
  return s;
}

}  // namespace

double CampaignConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tol.find(name);
  return it == tol.end() ? fallback : it->second;
}

CampaignConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  CampaignConfig cfg;
  auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
  };
  auto integer = [](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<long long>();
  };
  auto text = [](const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
  };

  for (const auto& [key, v] : doc.items()) {
    if (key == "campaign") {
      cfg.campaign = text(v, key);
      const auto names = campaign_names();
      if (*cfg.campaign != "all" &&
          std::find(names.begin(), names.end(), *cfg.campaign) == names.end()) {
        throw ConfigError("unknown campaign '" + *cfg.campaign + "'");
      }
    } else if (key == "n") {
      const auto n = integer(v, key);
      if (n < 2 || n > 64) throw ConfigError("config key 'n' must be in [2, 64]");
      cfg.n = static_cast<int>(n);
    } else if (key == "law") {
      cfg.law = text(v, key);
      if (*cfg.law != "linear" && *cfg.law != "p-laplace" && *cfg.law != "mse") {
        throw ConfigError("config key 'law' must be linear, p-laplace or mse");
      }
    } else if (key == "p") {
      cfg.p = number(v, key);
      if (!(*cfg.p > 1.0)) throw ConfigError("config key 'p' must exceed 1");
    } else if (key == "C") {
      cfg.C = number(v, key);
    } else if (key == "radii") {
      if (!v.is_array() || v.empty()) throw ConfigError("config key 'radii' must be a non-empty array");
      std::vector<double> radii;
      for (const auto& x : v) radii.push_back(number(x, key));
      for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] >= 0.0)) throw ConfigError("radii must be non-negative");
        if (k > 0 && !(radii[k] > radii[k - 1])) throw ConfigError("radii must be sorted ascending");
      }
      cfg.radii = radii;
    } else if (key == "grid.nr" || key == "grid.ntheta") {
      const auto m = integer(v, key);
      if (m < 8 || m > 100000) throw ConfigError("config key '" + key + "' must be in [8, 100000]");
      (key == "grid.nr" ? cfg.grid_nr : cfg.grid_ntheta) = static_cast<int>(m);
    } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
      const double t = number(v, key);
      if (!(t > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive");
      cfg.tol[key.substr(4)] = t;
    } else if (key == "samples") {
      const auto m = integer(v, key);
      if (m < 1 || m > 100000000) throw ConfigError("config key 'samples' out of range");
      cfg.samples = static_cast<int>(m);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "outdir") {
      cfg.outdir = text(v, key);
    } else if (key == "solver.scheme") {
      cfg.scheme = text(v, key);
      if (*cfg.scheme != "newton" && *cfg.scheme != "picard" && *cfg.scheme != "gauss-seidel") {
        throw ConfigError("solver.scheme must be newton, picard or gauss-seidel");
      }
    } else if (key == "solver.damping") {
      cfg.damping = number(v, key);
      if (!(*cfg.damping > 0.0 && *cfg.damping <= 1.0)) {
        throw ConfigError("solver.damping must be in (0, 1]");
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

CampaignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

bool VerificationReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

int VerificationReport::n_failed() const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass; }));
}

void VerificationReport::add_close(std::string id, double r, double expected, double observed,
                                   double tol) {
  CheckRow row = make_row(std::move(id), r, expected, observed, tol);
  row.pass = row.abs_err <= tol;
  rows.push_back(row);
}

void VerificationReport::add_relative(std::string id, double r, double expected, double observed,
                                      double rel_tol) {
  CheckRow row = make_row(std::move(id), r, expected, observed, rel_tol);
  row.pass = row.abs_err <= rel_tol * std::abs(expected);
  rows.push_back(row);
}

void VerificationReport::add_at_most(std::string id, double r, double bound, double observed,
                                     double tol) {
  CheckRow row = make_row(std::move(id), r, bound, observed, tol);
  row.pass = observed <= bound + tol;
  rows.push_back(row);
}

void VerificationReport::add_at_least(std::string id, double r, double bound, double observed,
                                      double tol) {
  CheckRow row = make_row(std::move(id), r, bound, observed, tol);
  row.pass = observed >= bound - tol;
  rows.push_back(row);
}

void VerificationReport::add_info(std::string id, double r, double observed) {
  CheckRow row = make_row(std::move(id), r, observed, observed, kInf);
  row.pass = true;
  rows.push_back(row);
}

void VerificationReport::add_failure(std::string id, double r, const std::string& reason) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CheckRow row = make_row(id, r, nan, nan, nan);
  row.pass = false;
  rows.push_back(row);
  notes.push_back(id + ": " + reason);
}

std::vector<std::string> campaign_names() {
  return {"adjoint-max", "harmonic", "radial", "solve2d", "compare", "translate-check",
          "decay-scan"};
}

VerificationReport run_adjoint_max(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "adjoint-max";
  const std::vector<double> radii = cfg.radii.value_or(std::vector<double>{0.0, 0.5, 1.0, 2.0, 5.0});
  const int per_shell = cfg.samples.value_or(10000);
  const int shells = 100;
  const double rel = cfg.tolerance("ball_rel", 1e-6);
  const double where = cfg.tolerance("argmax", 1e-2);

  for (double R : radii) {
    guarded(rep, "ball_max", R, [&] {
      const BallMaxSearch found = ad_norm_ball_max_numeric(R, shells, per_shell);
      rep.add_relative("ball_max", R, std::cosh(R) + std::sinh(R), found.value, rel);
      rep.add_relative("ball_max_closed_form", R, std::exp(R), ad_norm_ball_max(R), 1e-12);
      const double dx = found.argmax.x[0], ds = found.argmax.s - std::exp(R);
      rep.add_at_most("argmax_distance", R, 0.0, std::hypot(dx, ds), where);
      if (R > 0.0) {
        const ShellScan scan = ad_norm_shell_scan(R, shells, per_shell);
        CheckRow row = make_row("interior_margin", R, 0.0, scan.margin(), 0.0);
        row.pass = scan.margin() > 0.0;
        rep.rows.push_back(row);
      }
    });
  }
  rep.walltime_s = timer.seconds();
  return rep;
}

VerificationReport run_harmonic(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "harmonic";
  const int n = cfg.n.value_or(2);
  const double C = cfg.C.value_or(1.0);
  const std::vector<double> radii = cfg.radii.value_or(
      n == 2 ? std::vector<double>{2.0, 4.0, 6.0, 8.0, 10.0} : std::vector<double>{8.0, 10.0});
  const int sphere_samples = cfg.samples.value_or(4096);

  guarded(rep, "laplace_max", 0.0, [&] {
    const ScalarField2 v = counterexample(n, C);
    double lap = 0.0, grad_dev = 0.0, vmax = 0.0;
    for (int a = 0; a < 200; ++a) {
      const double r = 0.1 + (12.0 - 0.1) * a / 199.0;
      for (int b = 0; b < 64; ++b) {
        const double theta = kPi * (b + 0.5) / 64.0;
        lap = std::max(lap, std::abs(laplace_beltrami(v, n, {r, theta})));
        vmax = std::max(vmax, std::abs(v.value(r, theta)));
        if (n == 2) {
          const double g = gradient_norm(v, n, {r, theta});
          grad_dev = std::max(grad_dev, std::abs(g * 2.0 * (1.0 + std::cosh(r)) / C - 1.0));
        }
      }
    }
    rep.add_at_most("laplace_max", 12.0, 0.0, lap, cfg.tolerance("laplace", 1e-9));
    rep.add_close("laplace_constant", 1.0, 0.0,
                  laplace_beltrami(constant_field(2.5), n, {1.0, kPi / 3.0}), 1e-12);
    if (n == 2) rep.add_close("gradient_identity", 12.0, 0.0, grad_dev, 1e-12);
    rep.add_at_most("bounded", 12.0, 0.5 * std::abs(C), vmax, 1e-9 * std::abs(C));
    rep.add_at_least("nonconstant", 5.0, 0.9 * C, v.value(5.0, 0.0) - v.value(5.0, kPi), 0.0);
  });

  for (double R : radii) {
    guarded(rep, "decay_indicator", R, [&] {
      if (!(R > 0.0)) throw ConfigError("harmonic radii must be positive");
      const double observed = decay_indicator(counterexample(n, C), n, R, sphere_samples);
      if (n == 2) {
        const double closed = C / (1.0 + 2.0 * std::exp(-R) + std::exp(-2.0 * R));
        rep.add_close("decay_indicator", R, closed, observed, cfg.tolerance("decay_abs", 1e-4));
      } else {
        rep.add_relative("decay_indicator", R, C, observed, cfg.tolerance("decay_rel", 1e-2));
      }
    });
  }
  rep.walltime_s = timer.seconds();
  return rep;
}

VerificationReport run_radial(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "radial";
  const int n = cfg.n.value_or(2);
  const double source = cfg.C.value_or(0.1);
  const auto [r0, R] = annulus_radii(cfg);
  const double jump = 0.5;
  const double flux_tol = cfg.tolerance("flux", 1e-10);
  const double profile_tol = cfg.tolerance("profile", 1e-10);

  const std::vector<FluxLaw> laws{FluxLaw::linear(), FluxLaw::p_laplace(1.5),
                                  FluxLaw::p_laplace(3.0), FluxLaw::minimal_surface()};
  for (const FluxLaw& law : laws) {
    for (double C : {0.0, source}) {
      const std::string tag = law.name() + "/" + c_label(C);
      guarded(rep, with_suffix("flux_drift", tag), R, [&] {
        const RadialSolution sol = radial_solve(law, n, C, r0, R, 0.0, jump);
        double drift = 0.0;
        for (int k = 0; k <= 200; ++k) {
          const double r = r0 + (R - r0) * k / 200.0;
          drift = std::max(drift, std::abs(sol.flux_invariant(r) - sol.flux));
        }
        rep.add_at_most(with_suffix("flux_drift", tag), R, 0.0,
                        drift / std::max(1.0, std::abs(sol.flux)), flux_tol);
        rep.add_close(with_suffix("boundary_match", tag), R, jump, sol.value(R), profile_tol);
      });
    }
  }

  guarded(rep, "linear_closed_form", R, [&] {
    const RadialSolution sol = radial_solve(FluxLaw::linear(), 2, 0.0, r0, R, 0.0, 1.0);
    auto lt = [](double r) { return std::log(std::tanh(0.5 * r)); };
    const double span = lt(R) - lt(r0);
    rep.add_relative("linear_flux", R, 1.0 / span, sol.flux, profile_tol);
    double worst = 0.0;
    for (int k = 0; k <= 200; ++k) {
      const double r = r0 + (R - r0) * k / 200.0;
      worst = std::max(worst, std::abs(sol.value(r) - (lt(r) - lt(r0)) / span));
    }
    rep.add_close("linear_closed_form", R, 0.0, worst, profile_tol);
  });

  // A unit-height jump across [0.05, 2] would need a(|u'|) > 1 near r = 0.05.
  guarded(rep, "mse_nonexistence", 0.05, [&] {
    try {
      radial_solve(FluxLaw::minimal_surface(), 2, 0.0, 0.05, 2.0, 0.0, 10.0);
      rep.add_close("mse_nonexistence", 0.05, 1.0, 0.0, 0.0);
    } catch (const NoSolution& e) {
      rep.add_close("mse_nonexistence", e.radius(), 1.0, 1.0, 0.0);
    }
  });

  for (const FluxLaw& law : {FluxLaw::linear(), FluxLaw::p_laplace(3.0)}) {
    const std::string id = with_suffix("disk_rigidity", law.name());
    guarded(rep, id, R, [&] {
      const AnnulusGrid g = AnnulusGrid::disk(R, 16, 16);
      const RingData bd = RingData::from_functions(g, {}, [](double) { return 0.7; });
      const SolveResult res = fd_solve(g, law, 0.0, bd, solver_params(cfg));
      double dev = 0.0;
      for (double x : res.u.values) dev = std::max(dev, std::abs(x - 0.7));
      rep.add_close(id, R, 0.0, dev, 1e-10);
    });
  }
  rep.walltime_s = timer.seconds();
  return rep;
}

VerificationReport run_solve2d(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "solve2d";
  const FluxLaw law = config_law(cfg, "linear");
  const double C = cfg.C.value_or(0.0);
  const auto [r0, R] = annulus_radii(cfg);
  const int nr = cfg.grid_nr.value_or(64);
  const int nt = cfg.grid_ntheta.value_or(64);
  const SolverParams params = solver_params(cfg);

  guarded(rep, "order", R, [&] {
    const RadialSolution oracle = radial_solve(law, 2, C, r0, R, 0.0, 1.0);
    double err[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
      const int scale = 1 << level;
      const AnnulusGrid g = AnnulusGrid::annulus(r0, R, nr * scale, nt * scale);
      const RingData bd =
          RingData::from_functions(g, [](double) { return 0.0; }, [](double) { return 1.0; });
      const SolveResult res = fd_solve(g, law, C, bd, params);
      std::vector<double> exact(static_cast<std::size_t>(g.nr() + 1));
      for (int i = 0; i <= g.nr(); ++i) exact[static_cast<std::size_t>(i)] = oracle.value(g.r(i));
      for (int i = 0; i <= g.nr(); ++i) {
        for (int j = 0; j < g.ntheta(); ++j) {
          err[level] = std::max(err[level], std::abs(res.u(i, j) - exact[static_cast<std::size_t>(i)]));
        }
      }
      const std::string tag = level == 0 ? "h" : "h/2";
      rep.add_at_most(with_suffix("residual", tag), R, 0.0, res.residual, params.tol);
      rep.add_at_most(with_suffix("max_error", tag), R, 0.0, err[level], g.hr() * g.hr());
    }
    rep.add_close("order", R, 2.0, std::log2(err[0] / err[1]), cfg.tolerance("order", 0.1));
  });

  guarded(rep, "constant_data", R, [&] {
    const AnnulusGrid g = AnnulusGrid::annulus(r0, R, nr, nt);
    const RingData bd =
        RingData::from_functions(g, [](double) { return 0.3; }, [](double) { return 0.3; });
    const SolveResult res = fd_solve(g, law, 0.0, bd, params);
    double dev = 0.0;
    for (double x : res.u.values) dev = std::max(dev, std::abs(x - 0.3));
    rep.add_close("constant_data", R, 0.0, dev, 1e-10);
  });

  guarded(rep, "max_principle", R, [&] {
    const AnnulusGrid g = AnnulusGrid::annulus(r0, R, nr, nt);
    auto cosine = [](double t) { return std::cos(t); };
    const RingData bd = RingData::from_functions(g, cosine, cosine);
    const SolveResult res = fd_solve(g, FluxLaw::linear(), 0.0, bd, params);
    double lo = kInf, hi = -kInf;
    for (int j = 0; j < g.ntheta(); ++j) {
      for (int i : {0, g.nr()}) {
        lo = std::min(lo, res.u(i, j));
        hi = std::max(hi, res.u(i, j));
      }
    }
    double margin = kInf;
    for (int i = 1; i < g.nr(); ++i) {
      for (int j = 0; j < g.ntheta(); ++j) {
        margin = std::min({margin, res.u(i, j) - lo, hi - res.u(i, j)});
      }
    }
    rep.add_at_least("max_principle", R, 0.0, margin, 0.0);
  });
  rep.walltime_s = timer.seconds();
  return rep;
}

VerificationReport run_compare(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "compare";
  const auto [r0, R] = annulus_radii(cfg);
  const int nr = cfg.grid_nr.value_or(32);
  const int nt = cfg.grid_ntheta.value_or(32);
  const double C = cfg.C.value_or(0.0);
  const int pairs = cfg.samples.value_or(20);
  const double tol = cfg.tolerance("compare", 1e-8);
  const SolverParams params = solver_params(cfg);
  const AnnulusGrid g = AnnulusGrid::annulus(r0, R, nr, nt);
  std::mt19937_64 rng(cfg.seed);

  auto solve = [&](const FluxLaw& law, const std::function<double(double)>& in,
                   const std::function<double(double)>& out) {
    return fd_solve(g, law, C, RingData::from_functions(g, in, out), params).u;
  };

  guarded(rep, "identical", R, [&] {
    const DiscreteField u = solve(FluxLaw::linear(), [](double t) { return std::sin(t); },
                                  [](double t) { return 1.0 + 0.5 * std::cos(2.0 * t); });
    rep.add_close("identical", R, 0.0, comparison_check(u, u, tol).min_margin, 0.0);
  });

  guarded(rep, "linear_shift", R, [&] {
    auto in = [](double t) { return 0.3 * std::cos(t); };
    auto out = [](double t) { return 1.0 - 0.2 * std::sin(3.0 * t); };
    const DiscreteField u = solve(FluxLaw::linear(), in, out);
    const DiscreteField v = solve(FluxLaw::linear(), [&](double t) { return in(t) + 0.1; },
                                  [&](double t) { return out(t) + 0.1; });
    rep.add_at_least("linear_shift", R, 0.1, comparison_check(u, v, tol).min_margin, tol);
  });

  const std::vector<std::pair<FluxLaw, double>> laws{{FluxLaw::linear(), 1.0},
                                                     {FluxLaw::p_laplace(cfg.p.value_or(3.0)), 1.0},
                                                     {FluxLaw::minimal_surface(), 0.3}};
  for (const auto& [law, amplitude] : laws) {
    for (int k = 0; k < pairs; ++k) {
      const std::string tag = law.name() + "/" + std::to_string(k);
      // Draw everything for this pair before solving, so a failure cannot
      // shift the random stream of later pairs.
      const RingSeries in = random_series(rng, amplitude, 3);
      const RingSeries out = random_series(rng, amplitude, 3);
      const double shift = 0.3 * amplitude * uniform01(rng);
      const double phase = 2.0 * kPi * uniform01(rng);
      const int mode = 1 + static_cast<int>(3.0 * uniform01(rng));
      const std::uint64_t pair_seed = rng();
      auto gap = [=](double t) { return shift * (1.0 + 0.9 * std::cos(mode * t + phase)); };

      guarded(rep, with_suffix("compare", tag), R, [&] {
        const DiscreteField u = solve(law, in, out);
        const DiscreteField v = solve(law, [&](double t) { return in(t) + gap(t); },
                                      [&](double t) { return out(t) + gap(t); });
        rep.add_at_least(with_suffix("compare", tag), R, 0.0, comparison_check(u, v, tol).min_margin,
                         tol);
        for (const auto& [name, w] : {std::pair<const char*, const DiscreteField*>{"u", &u},
                                      std::pair<const char*, const DiscreteField*>{"v", &v}}) {
          const GradientBoundReport gb = gradient_bound_check(*w, R);
          rep.add_at_most(with_suffix(with_suffix("gradient_bound", tag), name), R,
                          gb.bound_factor * gb.boundary_max, gb.interior_max, gb.slack);
          rep.add_info(with_suffix(with_suffix("single_factor_ratio", tag), name), R,
                       gb.single_factor_ratio);
        }
        const TranslationEstimateReport te = translation_estimate_check(u, R, 200, pair_seed);
        rep.add_at_most(with_suffix("translation_estimate", tag), R, te.bound, te.worst_ratio, 0.0);
      });
    }
  }
  rep.walltime_s = timer.seconds();
  return rep;
}

VerificationReport run_translate(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "translate-check";
  const auto [r0, R] = annulus_radii(cfg);
  const int nr = cfg.grid_nr.value_or(128);
  int nt = cfg.grid_ntheta.value_or(0);
  if (nt == 0) {
    // Angular spacing matched to the radial one, rounded to an even count.
    nt = 2 * static_cast<int>(std::lround(kPi * nr / (R - r0)));
  }
  const int translations = cfg.samples.value_or(5);
  const double harmonic_tol = cfg.tolerance("translate", 1e-5);
  std::mt19937_64 rng(cfg.seed);
  const FluxLaw linear = FluxLaw::linear();

  guarded(rep, "harmonic", R, [&] {
    const AnnulusGrid g = AnnulusGrid::annulus(r0, R, nr, nt);
    const ScalarField2 v = counterexample(2, 1.0);
    const DiscreteField u = DiscreteField::sample(g, v.value);

    const TranslateReport id = left_translate_check(u, linear, 0.0, identity(2));
    rep.add_close("identity", 0.0, id.baseline_residual, id.translated_residual,
                  1e-9 * std::max(1.0, id.baseline_residual));
    rep.add_info("baseline_residual", 0.0, id.baseline_residual);

    TranslateParams tp;
    tp.abs_tol = harmonic_tol;
    for (int k = 0; k < translations; ++k) {
      const double d = 0.2 * uniform01(rng);
      const double phi = 2.0 * kPi * uniform01(rng);
      const GElem z = to_element(polar_chart(d, phi));
      const TranslateReport tr = left_translate_check(u, linear, 0.0, z, tp);
      rep.add_at_most(with_suffix("harmonic", std::to_string(k)), d, 0.0, tr.translated_residual,
                      harmonic_tol);
    }
  });

  guarded(rep, "nonlinear", R, [&] {
    const FluxLaw law = FluxLaw::p_laplace(cfg.p.value_or(3.0));
    const double C = cfg.C.value_or(0.1);
    const RadialSolution sol = radial_solve(law, 2, C, r0, R, 0.0, 1.0);
    const AnnulusGrid g = AnnulusGrid::annulus(r0, R, nr / 2, std::max(8, nt / 4 * 2));
    std::vector<double> profile(static_cast<std::size_t>(g.nr() + 1));
    for (int i = 0; i <= g.nr(); ++i) profile[static_cast<std::size_t>(i)] = sol.value(g.r(i));
    DiscreteField u(g);
    for (int i = 0; i <= g.nr(); ++i) {
      for (int j = 0; j < g.ntheta(); ++j) u(i, j) = profile[static_cast<std::size_t>(i)];
    }
    const double d = 0.1;
    const GElem z(Vec::Zero(1), std::exp(d));
    TranslateParams tp;
    tp.factor = cfg.tolerance("translate_factor", 10.0);
    const TranslateReport tr = left_translate_check(u, law, C, z, tp);
    rep.add_info("nonlinear_baseline", d, tr.baseline_residual);
    rep.add_at_most("nonlinear", d, tr.tolerance, tr.translated_residual, 0.0);
  });
  rep.walltime_s = timer.seconds();
  return rep;
}

VerificationReport run_decay(const CampaignConfig& cfg) {
  Timer timer;
  VerificationReport rep;
  rep.campaign = "decay-scan";
  const double C = cfg.C.value_or(1.0);
  const std::vector<double> radii =
      cfg.radii.value_or(std::vector<double>{2.0, 4.0, 6.0, 8.0, 10.0, 12.0});
  const int samples = cfg.samples.value_or(4096);

  guarded(rep, "decay", radii.back(), [&] {
    const RadialSolution radial = radial_solve(FluxLaw::linear(), 2, 0.0, 1.0, 2.0, 0.0, 1.0);
    const std::vector<DecaySource> family{decay_source(constant_field(0.5), 2, samples),
                                          decay_source(counterexample(2, C), 2, samples),
                                          decay_source(radial)};
    const DecayTable table = decay_scan(family, radii);
    const double A = std::abs(radial.flux);

    std::map<std::string, std::function<double(double)>> closed{
        {family[0].label, [](double) { return 0.0; }},
        {family[1].label,
         [C](double R) { return C / (1.0 + 2.0 * std::exp(-R) + std::exp(-2.0 * R)); }},
        {family[2].label, [A](double R) { return std::exp(R) * A / std::sinh(R); }}};
    for (const DecayRow& row : table.rows) {
      const double expected = closed.at(row.label)(row.R);
      rep.add_close(with_suffix("indicator", row.label), row.R, expected, row.indicator,
                    1e-12 * std::max(1.0, std::abs(expected)));
    }

    const std::map<std::string, DecayClass> want{{family[0].label, DecayClass::kToZero},
                                                 {family[1].label, DecayClass::kToPositive},
                                                 {family[2].label, DecayClass::kToPositive}};
    for (const auto& [label, cls] : table.classes) {
      rep.add_close(with_suffix("class", label), radii.back(),
                    static_cast<double>(want.at(label)), static_cast<double>(cls), 0.0);
    }
    auto last = [&](const std::string& label) {
      double v = 0.0;
      for (const DecayRow& row : table.rows) {
        if (row.label == label) v = row.indicator;
      }
      return v;
    };
    rep.add_relative("plateau/counterexample", radii.back(), C, last(family[1].label),
                     cfg.tolerance("plateau", 0.05));
    rep.add_relative("plateau/radial", radii.back(), 2.0 * A, last(family[2].label),
                     cfg.tolerance("radial_limit", 0.01));
  });
  rep.walltime_s = timer.seconds();
  return rep;
}

std::vector<VerificationReport> run_campaign(const std::string& name, const CampaignConfig& cfg) {
  using Runner = VerificationReport (*)(const CampaignConfig&);
  const std::vector<std::pair<std::string, Runner>> table{
      {"adjoint-max", run_adjoint_max}, {"harmonic", run_harmonic},
      {"radial", run_radial},           {"solve2d", run_solve2d},
      {"compare", run_compare},         {"translate-check", run_translate},
      {"decay-scan", run_decay}};
  std::vector<VerificationReport> out;
  for (const auto& [id, run] : table) {
    if (name == "all" || name == id) out.push_back(run(cfg));
  }
  if (out.empty()) throw ConfigError("unknown campaign '" + name + "'");
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "check_id,param_r,expected,observed,abs_err,rel_err,tol,pass\n";
  for (const CheckRow& r : report.rows) {
    out << r.check_id << ',' << format_number(r.param_r) << ',' << format_number(r.expected) << ','
        << format_number(r.observed) << ',' << format_number(r.abs_err) << ','
        << format_number(r.rel_err) << ',' << format_number(r.tol) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string summary_json(const std::vector<VerificationReport>& reports) {
  json arr = json::array();
  for (const VerificationReport& r : reports) {
    arr.push_back({{"campaign", r.campaign},
                   {"pass", r.pass()},
                   {"n_checks", r.rows.size()},
                   {"n_failed", r.n_failed()},
                   {"walltime_s", r.walltime_s}});
  }
  return arr.dump(2) + "\n";
}

void write_outputs(const std::vector<VerificationReport>& reports, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  for (const VerificationReport& r : reports) {
    std::ofstream out(std::filesystem::path(dir) / (r.campaign + ".csv"), std::ios::binary);
    if (!out) throw ConfigError("cannot write to " + dir);
    out << to_csv(r);
  }
  std::ofstream summary(std::filesystem::path(dir) / "summary.json", std::ios::binary);
  if (!summary) throw ConfigError("cannot write to " + dir);
  summary << summary_json(reports);
}

}  // namespace hyplab

#pragma once

// Named verification campaigns over the geometry, group and solver modules.
// Each campaign produces fixed-column rows
//   check_id, param_r, expected, observed, abs_err, rel_err, tol, pass
// and an overall verdict that is the conjunction of the row verdicts.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyplab {

/// Malformed configuration or usage; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat-key configuration. Unset fields fall back to per-campaign defaults.
///
///   campaign      string   one of campaign_names()
///   n             int      dimension (harmonic, radial)
///   law           string   "linear" | "p-laplace" | "mse" (solve2d)
///   p             number   p-Laplace exponent
///   C             number   source constant
///   radii         [number] ascending radii
///   grid.nr       int      radial intervals
///   grid.ntheta   int      angular nodes
///   tol.<name>    number   tolerance override, > 0
///   samples       int      sample count (per shell, per sphere, pairs)
///   seed          int      randomized checks, default 42
///   outdir        string   output directory
///   solver.scheme string   "newton" (default) | "picard" | "gauss-seidel"
///   solver.damping number  Gauss-Seidel damping
struct CampaignConfig {
  std::optional<std::string> campaign;
  std::optional<int> n;
  std::optional<std::string> law;
  std::optional<double> p;
  std::optional<double> C;
  std::optional<std::vector<double>> radii;
  std::optional<int> grid_nr;
  std::optional<int> grid_ntheta;
  std::map<std::string, double> tol;
  std::optional<int> samples;
  std::uint64_t seed{42};
  std::optional<std::string> outdir;
  std::optional<std::string> scheme;
  std::optional<double> damping;

  double tolerance(const std::string& name, double fallback) const;
};

/// Parses a JSON document. Throws ConfigError on syntax errors, unknown keys,
/// wrong types, non-positive tolerances or unsorted radii.
CampaignConfig parse_config(const std::string& json_text);
CampaignConfig load_config(const std::string& path);

struct CheckRow {
  std::string check_id;
  double param_r{0};
  double expected{0};
  double observed{0};
  double abs_err{0};
  double rel_err{0};
  double tol{0};
  bool pass{false};
};

struct VerificationReport {
  std::string campaign;
  std::vector<CheckRow> rows;
  double walltime_s{0};

  bool pass() const;
  int n_failed() const;

  /// |observed - expected| <= tol.
  void add_close(std::string id, double r, double expected, double observed, double tol);
  /// |observed - expected| <= tol * |expected|.
  void add_relative(std::string id, double r, double expected, double observed, double rel_tol);
  /// observed <= bound + tol.
  void add_at_most(std::string id, double r, double bound, double observed, double tol);
  /// observed >= bound - tol.
  void add_at_least(std::string id, double r, double bound, double observed, double tol);
  /// Recorded value with no assertion; tol is written as inf.
  void add_info(std::string id, double r, double observed);
  /// A failed row for an exception raised while running a check.
  void add_failure(std::string id, double r, const std::string& reason);

  /// Diagnostics for failed checks, not part of the CSV.
  std::vector<std::string> notes;
};

std::vector<std::string> campaign_names();

VerificationReport run_adjoint_max(const CampaignConfig& cfg);
VerificationReport run_harmonic(const CampaignConfig& cfg);
VerificationReport run_radial(const CampaignConfig& cfg);
VerificationReport run_solve2d(const CampaignConfig& cfg);
VerificationReport run_compare(const CampaignConfig& cfg);
VerificationReport run_translate(const CampaignConfig& cfg);
VerificationReport run_decay(const CampaignConfig& cfg);

/// Dispatches by campaign name; "all" runs every campaign in declaration order.
std::vector<VerificationReport> run_campaign(const std::string& name, const CampaignConfig& cfg);

/// "%.17g" formatting, with nan / inf / -inf spelled out.
std::string format_number(double x);
std::string to_csv(const VerificationReport& report);
std::string summary_json(const std::vector<VerificationReport>& reports);

/// Writes <campaign>.csv for every report and summary.json into dir.
void write_outputs(const std::vector<VerificationReport>& reports, const std::string& dir);

}  // namespace hyplab

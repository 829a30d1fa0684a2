#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lamvib/effective.hpp"
#include "lamvib/modal.hpp"

namespace lamvib {

struct CaseSpec {
  std::string id;
  BoundaryCondition bc = BoundaryCondition::SimplySupported;
  CrossSection section{0.01, 0.76e-3, 0.01, 0.1};
  std::string material;
  double temperature = kDefaultDataTemperature;  // [deg C]
  double length = 1.0;                           // [m]
  double width = 0.1;                            // [m]
};

/// The built-in 63-case matrix: {S-S, F-F, C-C} x three cross-sections
/// (10/0.76/10, 15/0.76/5, 10/1.52/10 mm) x seven material-temperature pairs
/// (SGP_M, TPU_M, PVB_M, PVB_S @25; PVB_S, PVB_A @50; PVB_A @25), l = 1 m,
/// b = 0.1 m, in deterministic order.
std::vector<CaseSpec> generate_matrix();

struct MethodCell {
  bool attempted = false;
  bool converged = false;
  double frequency_hz = std::numeric_limits<double>::quiet_NaN();
  double loss_factor = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double residual = 0.0;
  bool extrapolated = false;  // |omega| outside 2 pi [1e-2, 1e4] rad/s
  std::string failure;
};

struct CaseResult {
  CaseSpec spec;
  int modes = 0;
  // cells[method][mode-1]
  std::map<Method, std::vector<MethodCell>> cells;
  std::string case_failure;  // set when the case could not run at all

  const MethodCell* cell(Method method, int mode) const;
};

struct StudySettings {
  SolverSettings solver;
  int elements = 200;
  std::vector<Method> methods = {Method::Cnm, Method::Mse, Method::Det,
                                 Method::Eet};
  int threads = 0;  // 0: hardware concurrency
  std::vector<std::string> group_by = {"bc"};
  MaterialDatabase database = builtin_database();
};

/// Build the beam described by a case spec against the settings' database.
LaminatedBeam make_beam(const CaseSpec& spec, const MaterialDatabase& db);

/// Run every requested method for the first `solver.modes` elastic modes.
/// Method failures are recorded in the cell, not thrown.
CaseResult run_case(const CaseSpec& spec, const StudySettings& settings);

/// Run a batch concurrently; the result order follows the spec order
/// regardless of scheduling.
std::vector<CaseResult> run_matrix(const std::vector<CaseSpec>& specs,
                                   const StudySettings& settings);

struct BoxStats {
  int count = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

/// Type-7 (linear interpolation) percentile of sorted data, p in [0, 1].
double percentile(const std::vector<double>& sorted, double p);

/// Box statistics with 1.5 IQR whiskers.
BoxStats box_stats(std::vector<double> values);

/// Pearson correlation coefficient.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct SummaryStats {
  /// Relative-error box plots versus CNM, keyed
  /// "<method>|<err_f|err_eta>|mode<k>|<group>" where <group> is "all" or
  /// "<field>=<value>" per configured grouping field.
  std::map<std::string, BoxStats> error_boxes;
  /// Pearson correlation of method values against CNM values, keyed
  /// "<method>|<f|eta>|mode<k>".
  std::map<std::string, double> pearson_vs_cnm;
  /// Failed (method, mode) cells per method name.
  std::map<std::string, int> failure_counts;
};

SummaryStats summarize(const std::vector<CaseResult>& results,
                       const std::vector<std::string>& group_by = {"bc"});

/// Write cases.csv, summary.json, and qq_mode1.csv into out_dir.
/// Deterministic: identical inputs produce byte-identical files.
void emit(const std::vector<CaseResult>& results, const SummaryStats& stats,
          const std::string& out_dir);

struct StudyConfig {
  StudySettings settings;
  std::vector<CaseSpec> cases;  // empty: use generate_matrix()
  std::string out_dir = "results";
};

StudyConfig load_config(const std::string& path);

}  // namespace lamvib

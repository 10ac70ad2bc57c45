#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cq/functionals.hpp"
#include "cq/shooting.hpp"

namespace cq::branch {

struct Row {
  double omega;
  functionals::FunctionalSet fs;
};

struct SpecialPoints {
  double omega_beta_third = 0.0;
  double mass_beta_third = 0.0;
  double omega_min_mass = 0.0;
  double min_mass = 0.0;
  double omega_zero_energy = 0.0;
  double mass_q1 = 0.0;  // M(Q_1)
  double kinetic_q1 = 0.0;
};

/// Frequency sweep of the ground-state family, ordered by omega.
struct BranchTable {
  std::vector<Row> rows;
  std::optional<SpecialPoints> special_points;

  const Row& at(std::size_t i) const { return rows[i]; }
  std::size_t size() const { return rows.size(); }
};

struct SweepOptions {
  shooting::SolveOptions solver;
  unsigned jobs = 0;           // 0 = hardware concurrency
  bool keep_profiles = false;  // retain profiles for downstream verification
};

struct SweepResult {
  BranchTable table;
  std::vector<shooting::SolitonProfile> profiles;  // aligned with table.rows when kept
  std::vector<std::string> failures;               // "omega=...: reason", non-fatal
};

/// 200 frequencies: log-spaced over (1e-3, 0.12), linear over (0.12, 0.186).
std::vector<double> default_sweep_omegas();

/// Solve every row independently (parallel below the shooting limit, warm
/// Newton ladder above it); failed rows are recorded, not fatal.
SweepResult sweep(std::span<const double> omegas, const SweepOptions& opt = {});

struct DerivativeReport {
  double max_kinetic_mismatch = 0.0;  // |dG/dw - 1.5 M| / (1.5 M)
  double max_energy_mismatch = 0.0;   // |dE/dw + (w/2) dM/dw| relative
  bool mass_slope_bound_ok = true;    // dM/dw < (3 beta - 1) M / (2 w)
  std::size_t interior_rows = 0;
};

/// Centered-difference checks of the branch derivative identities.
DerivativeReport derivative_checks(const BranchTable& table);

/// Root-refine the three distinguished frequencies bracketed by the table.
SpecialPoints locate_special_points(const BranchTable& table,
                                    const shooting::SolveOptions& solver = {});

struct SmallOmegaReport {
  struct Point {
    double omega;
    double mass_dev_leading;    // |M sqrt(w) - Mg| / Mg
    double mass_dev_corrected;  // with the second-order term
    double energy_dev_corrected;
    double beta_ratio_dev;      // |beta/w - beta_g| / beta_g
  };
  std::vector<Point> points;
  double residual_slope = 0.0;  // log-log slope of the leading-order residual
  double g_mass = 0.0;          // reference integrals of the cubic ground state
  double g_sextic = 0.0;
  double g_beta = 0.0;
};

SmallOmegaReport asymptotics_small_omega(const shooting::SolitonProfile& g,
                                         std::span<const double> omegas,
                                         const shooting::SolveOptions& solver = {});

struct LargeOmegaReport {
  double slope_mass = 0.0;     // expected -3
  double slope_abs_energy = 0.0;  // expected -3
  double slope_beta = 0.0;     // expected -1
  double slope_kinetic = 0.0;  // expected -2
  std::vector<Row> rows;
};

LargeOmegaReport asymptotics_large_omega(std::span<const double> omegas,
                                         const shooting::SolveOptions& solver = {});

/// Empirical monotonicity scans; anomalies are warnings, never failures.
struct ConjectureScan {
  bool beta_strictly_increasing = true;
  int mass_slope_sign_changes = 0;
  std::vector<std::string> warnings;
};

ConjectureScan conjecture_scan(const BranchTable& table);

}  // namespace cq::branch

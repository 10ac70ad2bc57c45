#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cq/branch.hpp"
#include "cq/shooting.hpp"

namespace cq::region {

enum class Provenance { Soliton, Rescaled };

struct CurvePoint {
  double omega;
  double mass;
  double energy;
};

struct EnvelopePoint {
  double mass;
  double energy;  // least energy at zero virial for this mass
  Provenance provenance;
  double omega;  // parameter of the owning curve at this mass
};

struct Thresholds {
  double mass_q1 = 0.0;       // common mass of the zero-energy optimizers
  double mass_star = 0.0;     // 4/(3 sqrt 3) mass_q1; scattering mass threshold
  double evmin_at_star = 0.0;
  double m0 = 0.0;            // provenance switch of the envelope (its kink)
};

/// Mass/energy picture: both curves, the lower envelope of energies at zero
/// virial, the thresholds, and the foliation function D.
class RegionModel {
 public:
  std::vector<CurvePoint> soliton_curve;   // restricted to beta > 1/3
  std::vector<CurvePoint> rescaled_curve;
  std::vector<EnvelopePoint> evmin_table;  // ascending mass from mass_star
  Thresholds thresholds;
  int curve_crossings = 0;  // observed count, reported rather than asserted

  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }

  /// Envelope value; +infinity below the mass threshold, linear
  /// extrapolation past the table end (flagged via `extrapolated`).
  double evmin_at(double m, bool* extrapolated = nullptr) const;

  /// Open scattering region membership with a relative safety margin.
  bool in_region(double m, double e, double margin = 1e-3) const;

  /// Closed set of mass/energy pairs at or past the zero-virial envelope.
  bool in_complement(double m, double e) const;

  /// Distance from (m, e) to the complement's boundary polyline (vertical
  /// ray at mass_star plus the envelope graph).
  double distance_to_complement(double m, double e) const;
};

struct BuildOptions {
  double mass_max = 400.0;
  std::size_t envelope_points = 240;
  shooting::SolveOptions solver;
};

/// Assemble the region from a full branch sweep.  The envelope minimizes
/// over soliton rows with beta > 1/3 and the rescaled family; m0 is then
/// refined by bisection on freshly solved profiles.
RegionModel build_region(const branch::BranchTable& table,
                         const branch::SpecialPoints& special,
                         const BuildOptions& opt = {});

/// Least feasible energy at mass m: zero up to mass_q1, afterwards the
/// soliton minimum (never below the coercivity bound -3m/32).
double feasible_emin(double m, const RegionModel& model);

/// Foliation value D(m, e); zero only at the origin, +infinity on the
/// complement, strictly monotone in both arguments inside.
double d_function(double m, double e, const RegionModel& model);

struct VirialSample {
  double min_virial = std::numeric_limits<double>::infinity();
  std::size_t retained = 0;
  std::size_t trials = 0;
};

/// Seeded random radial states filtered to the region; every retained state
/// must have positive virial.
VirialSample virial_positivity_sample(const RegionModel& model, std::size_t trials,
                                      std::uint64_t seed, unsigned jobs = 0);

}  // namespace cq::region

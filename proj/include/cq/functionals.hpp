#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "cq/grid.hpp"
#include "cq/shooting.hpp"

namespace cq::functionals {

/// The scalar functionals of one radial function: mass M, kinetic term G,
/// quartic and sextic Lebesgue norms.  Energy, virial, and beta derive from
/// these and are never stored separately.
struct FunctionalSet {
  double mass = 0.0;     // integral of |u|^2
  double kinetic = 0.0;  // integral of |grad u|^2
  double quartic = 0.0;  // integral of |u|^4
  double sextic = 0.0;   // integral of |u|^6

  double energy() const { return 0.5 * kinetic - 0.25 * quartic + sextic / 6.0; }
  double virial() const { return kinetic + sextic - 0.75 * quartic; }
  double beta() const { return kinetic > 0.0 ? sextic / kinetic : 0.0; }
  /// Positive scale against which the (signed, near-zero) virial is judged.
  double virial_scale() const { return kinetic + sextic + 0.75 * quartic; }

  /// Momentum of radial data vanishes by symmetry; structural, not numerical.
  static std::array<double, 3> momentum() { return {0.0, 0.0, 0.0}; }
};

/// Exponential tail model P ~ exp(log_c - rate r)/r past the grid end.
struct TailModel {
  double log_c;
  double rate;
};

/// Composite quadrature of all base integrals with the 4 pi r^2 weight and a
/// Richardson half-grid consistency check (throws GridTooCoarse beyond 1e-6
/// relative).  The tail correction applies to mass and kinetic terms only;
/// quartic/sextic tails are below 1e-14 for any profile reaching the cutoff.
FunctionalSet evaluate(const RadialGrid& grid, std::span<const std::complex<double>> values,
                       const std::optional<TailModel>& tail = {});
FunctionalSet evaluate(const RadialGrid& grid, std::span<const double> values,
                       const std::optional<TailModel>& tail = {});
FunctionalSet evaluate(const shooting::SolitonProfile& profile);

struct PohozaevResiduals {
  double res1;  // pairing with the profile itself
  double res2;  // pairing with the scaling vector field
  double res3;  // quartic-mass relation
};

/// Relative residuals of the three soliton constraints; all-zero input maps
/// to zero residuals.
PohozaevResiduals pohozaev_residuals(const FunctionalSet& fs, double omega);

struct CompactIdentityResiduals {
  double id_mass;     // M = (beta+1) G / (3 omega)
  double id_quartic;  // L4 = 4 (beta+1) G / 3
  double id_energy;   // E = (1-beta) G / 6
};

CompactIdentityResiduals compact_identities(const FunctionalSet& fs, double omega);

/// Residual of E + (3/32) M = G/2 + (1/6) int |u|^2 (|u|^2 - 3/4)^2, with the
/// right side evaluated by a dedicated quadrature pass.  Holds for every u.
double coercivity_identity(const RadialGrid& grid,
                           std::span<const std::complex<double>> values);
double coercivity_identity(const RadialGrid& grid, std::span<const double> values);

/// Radial boost u -> exp(i xi r) u; preserves mass exactly and adds
/// xi^2 M / 2 to the energy of real input.
std::vector<std::complex<double>> radial_boost(const RadialGrid& grid,
                                               std::span<const std::complex<double>> values,
                                               double xi_mag);
std::vector<std::complex<double>> radial_boost(const RadialGrid& grid,
                                               std::span<const double> values,
                                               double xi_mag);

/// Cubic interpolation of a profile at radius r (tail model beyond the grid).
double profile_value(const shooting::SolitonProfile& profile, double r);

/// Grid rebuilt to match a stored profile.
RadialGrid profile_grid(const shooting::SolitonProfile& profile);

}  // namespace cq::functionals

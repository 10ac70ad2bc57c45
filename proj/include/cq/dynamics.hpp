#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "cq/grid.hpp"
#include "cq/shooting.hpp"

namespace cq::dynamics {

/// Complex radial field on a uniform grid in the w = r u representation;
/// the 3-d radial Laplacian becomes d^2/dr^2 with Dirichlet ends, which the
/// discrete sine transform diagonalizes exactly.
struct RadialField {
  double time = 0.0;
  double r_domain = 0.0;
  std::vector<std::complex<double>> w;  // w[0] = w[n] = 0
  bool boundary_warning = false;        // solution reached the outer wall

  std::size_t intervals() const { return w.size() - 1; }
  double spacing() const { return r_domain / double(intervals()); }
  /// Point values u_j = w_j / r_j with the origin value extrapolated.
  std::vector<std::complex<double>> field_values() const;
};

struct Observables {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double virial = 0.0;
  double kinetic = 0.0;
  double weighted_momentum = 0.0;  // A = 2 Im int conj(u) r du/dr dx
  double truncated_momentum = 0.0; // A_R at the configured truncation radius
  double sup_abs = 0.0;
};

struct EvolveOptions {
  std::size_t intervals = 4096;
  double r_domain = 100.0;
  double dt = 1e-3;
  std::size_t observe_every = 10;
  double truncation_radius = 40.0;  // for the logged A_R
};

inline constexpr double kDtMax = 1e-3;

/// Split-step integrator: exact pointwise nonlinear phase rotation around an
/// exact sine-transform linear step (Strang composition).  Owns the
/// transform plans; one instance per grid size.
class Evolver {
 public:
  Evolver(std::size_t intervals, double r_domain);
  ~Evolver();
  Evolver(const Evolver&) = delete;
  Evolver& operator=(const Evolver&) = delete;

  RadialField make_field(std::span<const std::complex<double>> u_values) const;
  RadialField from_profile(const shooting::SolitonProfile& profile) const;

  /// One Strang step of size dt (dt <= kDtMax).
  void step(RadialField& field, double dt) const;

  Observables observe(const RadialField& field, double truncation_radius) const;

  const RadialGrid& grid() const { return grid_; }

 private:
  std::size_t n_;
  double r_domain_;
  RadialGrid grid_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

struct EvolveResult {
  RadialField field;
  std::vector<Observables> log;
};

/// Iterate steps to t_end, logging observables every observe_every steps.
EvolveResult evolve(const Evolver& ev, RadialField initial, double t_end,
                    const EvolveOptions& opt);

/// Max relative defect of the centered dA/dt against 4V over interior log
/// rows; the floor term absorbs the soliton case where V = 0 exactly.
double virial_identity_check(std::span<const Observables> log);

/// Truncated weighted momentum A_R with a smooth plateau cutoff.
double truncated_virial(const Evolver& ev, const RadialField& field, double r_trunc);

/// The cutoff profile: 1 below 1, 0 above 2, quintic bridge between.
double cutoff_profile(double s);

}  // namespace cq::dynamics

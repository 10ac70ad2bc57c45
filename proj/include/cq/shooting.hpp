#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cq/errors.hpp"
#include "cq/ode.hpp"

namespace cq::shooting {

enum class ProfileKind { CubicQuintic, CubicOnly };

/// Radial ground-state profile on the fixed output grid.  Values beyond the
/// certified integration range follow the exponential tail
/// P(r) = c exp(-rate r)/r, with rate = sqrt(omega) (rate 1 for the cubic
/// ground state).
struct SolitonProfile {
  double omega = 0.0;  // holds 1 for the cubic-only ground state
  ProfileKind kind = ProfileKind::CubicQuintic;
  double center_value = 0.0;   // b = P(0)
  double tail_constant = 0.0;  // c (least-squares fit over the last decade)
  double tail_log_c = 0.0;     // log(c); safe for far-out fronts
  std::vector<double> grid;    // r_0 = 0 < r_1 < ... < r_N
  std::vector<double> values;  // P(r_j) > 0, decreasing

  double decay_rate() const { return std::sqrt(omega); }
  double quintic_coefficient() const { return kind == ProfileKind::CubicQuintic ? 1.0 : 0.0; }

  /// Tail model evaluated at radius r (valid beyond the fit band).
  double tail_value(double r) const { return std::exp(tail_log_c - decay_rate() * r) / r; }
};

/// Supremum bound b0 on ground-state amplitudes, valid for omega < 3/16.
double b0_bound(double omega);
/// The smaller positive stationary amplitude a0 of the nonlinearity.
double a0_bound(double omega);
/// Lower shooting bracket u_minus: decay requires p(P(0)) < 0.
double lower_bracket(double omega);
/// Integration range housing core, front, and tail below the cutoff.
double default_r_max(double omega);

enum class ShotOutcome { Overshoot, Undershoot, Decayed };

struct ShotResult {
  ShotOutcome outcome;
  double stop_radius = 0.0;
  ode::Trajectory sigma;  // sigma = r P along the shot, up to the stop
};

struct ShotOptions {
  double abs_tol = 1e-12;           // step control pair
  double rel_tol = 1e-10;
  double decay_cutoff = 1e-7;       // amplitude certifying a Decayed shot
  double quintic_coefficient = 1.0; // 0 for the cubic-only equation
};

/// One shot of the reduced equation sigma'' = q sigma^5/r^4 - sigma^3/r^2
/// + omega sigma with sigma ~ b r near zero.  Classifies the trajectory as
/// Overshoot (P crosses zero), Undershoot (P' > 0 while P is above twice the
/// cutoff) or Decayed (P fell below the cutoff while still decreasing, with
/// the decaying-branch log-derivative signature).
ShotResult shoot_once(double omega, double b, double r_max, const ShotOptions& opt = {});

struct SolveOptions {
  double tol_b = 1e-13;       // bisection width target
  double tail_cutoff = 1e-12; // profile must reach below this on the grid
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double r_max = 0.0;         // 0 = default_r_max(omega)
  enum class Method { Auto, Shooting, Newton } method = Method::Auto;
  std::size_t max_iterations = 200;
};

/// Ground state P_omega by bisection shooting on P(0); frequencies past the
/// shooting conditioning limit are reached by Numerov-Newton continuation.
SolitonProfile solve_ground_state(double omega, const SolveOptions& opt = {});

/// Cubic-only ground state g (quintic term absent, omega = 1).
SolitonProfile solve_cubic_ground_state(const SolveOptions& opt = {});

/// Largest omega handled by plain double-precision shooting; beyond it the
/// plateau growth factor exp(sqrt(W) R) makes bisection unable to certify.
inline constexpr double kShootingOmegaMax = 0.155;

/// Reusable solver.  Shooting solves are stateless; the Newton continuation
/// walks a fixed ladder of frequencies toward 3/16 and caches the last rung,
/// so ascending sweeps pay for the ladder once.  Results are identical to
/// fresh solves because only exact ladder rungs are cached.
class GroundStateSolver {
 public:
  explicit GroundStateSolver(SolveOptions opt = {}) : opt_(opt) {}

  SolitonProfile solve(double omega);

 private:
  struct Rung {
    double inv_t;
    std::size_t rung;
    double h;
    std::vector<double> sigma;
  };
  SolveOptions opt_;
  std::optional<Rung> base_;
  std::optional<Rung> last_;
};

}  // namespace cq::shooting

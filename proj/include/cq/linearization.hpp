#pragma once

#include <optional>
#include <vector>

#include "cq/shooting.hpp"

namespace cq::linearization {

enum class TerminalBehavior { DivergesNegative, Decays, Indeterminate };

/// Radial zero-energy solution of the linearized operator at a ground state,
/// normalized to delta(0) = 1.  Non-degeneracy shows as exactly one sign
/// change followed by divergence to -infinity.
struct DeltaSolution {
  double omega = 0.0;
  std::vector<double> grid;
  std::vector<double> delta_values;
  std::optional<double> sign_change_radius;  // first zero r_1
  int zero_count = 0;
  TerminalBehavior terminal = TerminalBehavior::Indeterminate;
};

/// Integrates the reduced form -sigma'' + W sigma = 0, sigma(0) = 0,
/// sigma'(0) = 1 with W = 5 q P^4 - 3 P^2 + omega interpolated cubically
/// from the profile.  Throws ProfileTooShort when the terminal behavior
/// cannot be classified at the grid end.
DeltaSolution solve_delta(const shooting::SolitonProfile& profile);

/// Number of interior zeros of delta; by Sturm oscillation this counts the
/// negative eigenvalues of the radial restriction of the linearization.
int morse_index_radial(const DeltaSolution& ds);

struct ZeroModeCheck {
  double max_residual = 0.0;  // relative, over the trusted window
  bool f_positive = false;    // f = -P' > 0 throughout
};

/// The angular-momentum-one zero mode: f = -P'(r) solves the l = 1 radial
/// equation with eigenvalue zero.  Verified on the numerically
/// differentiated profile over a window excluding origin round-off and the
/// vanishing tail.
ZeroModeCheck pprime_zero_mode(const shooting::SolitonProfile& profile);

}  // namespace cq::linearization

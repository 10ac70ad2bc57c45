#include "cq/ode.hpp"

#include <algorithm>

namespace cq::ode {

std::size_t Trajectory::locate(double x) const {
  auto it = std::upper_bound(r.begin(), r.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - r.begin());
  if (hi == 0) return 0;
  if (hi >= r.size()) return r.size() - 2;
  return hi - 1;
}

void Trajectory::truncate_at(double x_cut) {
  auto it = std::upper_bound(r.begin(), r.end(), x_cut);
  std::size_t n = static_cast<std::size_t>(it - r.begin());
  if (n < 2) n = 2;
  r.resize(std::min(n, r.size()));
  y.resize(r.size());
  d2.resize(r.size());
}

// Quintic Hermite on (u, u', u'') at both interval ends.
double Trajectory::eval(double x, int deriv) const {
  std::size_t i = locate(x);
  double h = r[i + 1] - r[i];
  double t = (x - r[i]) / h;
  double u0 = y[i][0], d0 = y[i][1] * h, s0 = d2[i] * h * h;
  double u1 = y[i + 1][0], d1 = y[i + 1][1] * h, s1 = d2[i + 1] * h * h;

  // Basis coefficients for p(t) = sum c_k t^k matching value/slope/curvature.
  double c0 = u0;
  double c1 = d0;
  double c2 = 0.5 * s0;
  double c3 = 10 * (u1 - u0) - 6 * d0 - 4 * d1 - 1.5 * s0 + 0.5 * s1;
  double c4 = -15 * (u1 - u0) + 8 * d0 + 7 * d1 + 1.5 * s0 - s1;
  double c5 = 6 * (u1 - u0) - 3 * (d0 + d1) - 0.5 * (s0 - s1);

  if (deriv == 0)
    return c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
  return (c1 + t * (2 * c2 + t * (3 * c3 + t * (4 * c4 + t * 5 * c5)))) / h;
}

}  // namespace cq::ode

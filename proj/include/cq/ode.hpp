#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cq/errors.hpp"

namespace cq::ode {

using State = std::array<double, 2>;

struct StepOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double h_init = 1e-6;
  double h_max = 0.05;
  std::size_t max_steps = 4'000'000;
};

/// Accepted-step record of a second-order scalar ODE integrated as the
/// first-order system y = (u, u').  The RHS supplies u'' so every node
/// carries (u, u', u''), enough for a C2 quintic Hermite reconstruction.
class Trajectory {
 public:
  std::vector<double> r;
  std::vector<State> y;    // (u, u')
  std::vector<double> d2;  // u''

  std::size_t size() const { return r.size(); }
  bool empty() const { return r.empty(); }

  /// Index of the node interval containing x (clamped).
  std::size_t locate(double x) const;

  double value(double x) const { return eval(x, 0); }
  double derivative(double x) const { return eval(x, 1); }

  /// Drop all nodes strictly beyond x_cut.
  void truncate_at(double x_cut);

 private:
  double eval(double x, int deriv) const;
};

/// Outcome signalled by the step monitor.
enum class Control { Continue, Stop };

/// Dormand-Prince 5(4) with an accepted-step monitor.  The RHS functor
/// maps (r, y) -> (y[1], u''); the monitor sees each accepted node and may
/// stop the run.  Throws NonFinite if the state leaves the finite range.
template <class Rhs, class Monitor>
void integrate(Rhs rhs, double r0, State y0, double r_end, const StepOptions& opt,
               Trajectory& out, Monitor monitor) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                          e7 = -1.0 / 40;

  auto finite = [](const State& s) {
    return std::isfinite(s[0]) && std::isfinite(s[1]);
  };

  double r = r0;
  State y = y0;
  State k1 = rhs(r, y);
  if (!finite(y) || !finite(k1)) throw NonFinite("non-finite initial data");

  out.r.push_back(r);
  out.y.push_back(y);
  out.d2.push_back(k1[1]);
  if (monitor(r, y, k1[1]) == Control::Stop) return;

  double h = std::min(opt.h_init, opt.h_max);
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (r >= r_end) return;
    h = std::min(h, r_end - r);

    auto stage = [&](double frac, const State& incr) {
      State s{y[0] + h * incr[0], y[1] + h * incr[1]};
      return rhs(r + frac * h, s);
    };
    State k2 = stage(c2, {a21 * k1[0], a21 * k1[1]});
    State k3 = stage(c3, {a31 * k1[0] + a32 * k2[0], a31 * k1[1] + a32 * k2[1]});
    State k4 = stage(c4, {a41 * k1[0] + a42 * k2[0] + a43 * k3[0],
                          a41 * k1[1] + a42 * k2[1] + a43 * k3[1]});
    State k5 = stage(c5, {a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0],
                          a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1]});
    State k6 = stage(1.0, {a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0],
                           a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1]});
    State ynew{y[0] + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]),
               y[1] + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1])};
    State k7 = rhs(r + h, ynew);

    if (!finite(ynew) || !finite(k7)) throw NonFinite("integrator state became non-finite");

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                       e7 * k7[i]);
      double sc = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(0.5 * err);

    if (err <= 1.0) {
      r += h;
      y = ynew;
      k1 = k7;  // FSAL
      out.r.push_back(r);
      out.y.push_back(y);
      out.d2.push_back(k1[1]);
      if (monitor(r, y, k1[1]) == Control::Stop) return;
    }
    double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    h = std::min(h, opt.h_max);
    if (h < 1e-14 * std::max(1.0, std::fabs(r)))
      throw NonFinite("step size underflow");
  }
  throw NoConvergence("integrator exceeded max step count");
}

}  // namespace cq::ode

#include "cq/linearization.hpp"

#include <algorithm>
#include <cmath>

#include "cq/errors.hpp"
#include "cq/functionals.hpp"
#include "cq/grid.hpp"
#include "cq/ode.hpp"

namespace cq::linearization {

namespace {

double potential(const shooting::SolitonProfile& prof, double r) {
  double p = functionals::profile_value(prof, r);
  double p2 = p * p;
  return 5.0 * prof.quintic_coefficient() * p2 * p2 - 3.0 * p2 + prof.omega;
}

}  // namespace

DeltaSolution solve_delta(const shooting::SolitonProfile& prof) {
  double r_end = prof.grid.back();
  double rate = prof.decay_rate();

  ode::StepOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-10;
  opt.h_max = 0.05 * std::clamp(std::sqrt(0.05 / prof.omega), 1.0, 8.0);
  opt.h_init = 1e-6;
  opt.max_steps = 10'000'000;

  auto rhs = [&](double r, ode::State y) -> ode::State {
    return {y[1], potential(prof, r) * y[0]};
  };

  ode::Trajectory tr;
  ode::integrate(rhs, 0.0, {0.0, 1.0}, r_end, opt, tr,
                 [](double, const ode::State&, double) { return ode::Control::Continue; });

  DeltaSolution ds;
  ds.omega = prof.omega;
  ds.grid.reserve(tr.size());
  ds.delta_values.reserve(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    double r = tr.r[i];
    ds.grid.push_back(r);
    ds.delta_values.push_back(r > 0.0 ? tr.y[i][0] / r : 1.0);
  }

  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    if ((tr.y[i][0] <= 0.0) != (tr.y[i + 1][0] <= 0.0)) {
      ++ds.zero_count;
      if (!ds.sign_change_radius) {
        double a = tr.r[i], b = tr.r[i + 1];
        for (int k = 0; k < 60; ++k) {
          double m = 0.5 * (a + b);
          if ((tr.value(a) <= 0.0) == (tr.value(m) <= 0.0))
            a = m;
          else
            b = m;
        }
        ds.sign_change_radius = 0.5 * (a + b);
      }
    }
  }

  // Growth rate of log|delta| over the last decade of radius against the
  // exponential dichotomy rates +-sqrt(omega); threshold at zero.
  double r_lo = r_end / 10.0;
  double s_lo = std::fabs(tr.value(r_lo));
  double s_hi = std::fabs(tr.y.back()[0]);
  bool window_clean = true;
  if (ds.sign_change_radius && *ds.sign_change_radius > r_lo) window_clean = false;
  if (s_lo == 0.0 || s_hi == 0.0) window_clean = false;
  if (!window_clean) {
    ds.terminal = TerminalBehavior::Indeterminate;
  } else {
    double growth = (std::log(s_hi) - std::log(s_lo)) / (r_end - r_lo);
    if (growth > 0.0)
      ds.terminal = (tr.y.back()[0] < 0.0) ? TerminalBehavior::DivergesNegative
                                           : TerminalBehavior::Indeterminate;
    else
      ds.terminal = TerminalBehavior::Decays;
    (void)rate;
  }
  if (ds.terminal == TerminalBehavior::Indeterminate)
    throw ProfileTooShort("terminal behavior indeterminate at the grid end");
  return ds;
}

int morse_index_radial(const DeltaSolution& ds) {
  if (ds.terminal == TerminalBehavior::Indeterminate)
    throw Error("morse index undefined for indeterminate terminal behavior");
  return ds.zero_count;
}

ZeroModeCheck pprime_zero_mode(const shooting::SolitonProfile& prof) {
  RadialGrid grid = functionals::profile_grid(prof);
  const auto& r = grid.r();
  std::size_t n = r.size();

  auto dp = grid.derivative(std::span<const double>(prof.values));
  std::vector<double> f(n), g(n);
  for (std::size_t j = 0; j < n; ++j) {
    f[j] = -dp[j];       // the l = 1 zero mode
    g[j] = r[j] * f[j];  // reduced form removes the first-derivative term
  }
  auto g2 = grid.second_derivative(std::span<const double>(g));

  // Trust window: past origin round-off amplification, before the tail where
  // every term vanishes.
  double r_lo = 0.2;
  double r_hi = r.back();
  for (std::size_t j = 0; j < n; ++j) {
    if (prof.values[j] < 1e-3 * prof.center_value) {
      r_hi = r[j];
      break;
    }
  }

  ZeroModeCheck out;
  out.f_positive = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (r[j] < r_lo || r[j] > r_hi) continue;
    if (f[j] <= 0.0) out.f_positive = false;
    double w = potential(prof, r[j]);
    double t1 = -g2[j];
    double t2 = 2.0 * g[j] / (r[j] * r[j]);
    double t3 = w * g[j];
    double scale = std::fabs(t1) + std::fabs(t2) + std::fabs(t3);
    if (scale == 0.0) continue;
    out.max_residual = std::max(out.max_residual, std::fabs(t1 + t2 + t3) / scale);
  }
  return out;
}

}  // namespace cq::linearization

#include "cq/shooting.hpp"
#include <cstdio>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>

#include "cq/grid.hpp"

namespace cq::shooting {

namespace {

constexpr double kOmegaSup = 3.0 / 16.0;
constexpr double kRStart = 1e-4;   // series start for the reduced equation
constexpr double kEps = 2.220446049250313e-16;

void check_omega(double omega) {
  if (!(omega > 0.0 && omega < kOmegaSup)) throw Error("omega outside (0, 3/16)");
}

struct Equation {
  double omega;
  double quintic;  // 1 or 0

  double rate() const { return std::sqrt(omega); }
};

// sigma'' = q sigma^5/r^4 - sigma^3/r^2 + omega sigma
inline double sigma_rhs(const Equation& eq, double r, double s) {
  if (r < 1e-300) return eq.omega * s;
  double u = s / r;                    // u = P
  double u2 = u * u;
  return (eq.quintic * u2 * u2 - u2) * u * r + eq.omega * s;
}

inline double dsigma_rhs(const Equation& eq, double r, double s) {
  if (r < 1e-300) return eq.omega;
  double u = s / r;
  double u2 = u * u;
  return 5.0 * eq.quintic * u2 * u2 - 3.0 * u2 + eq.omega;
}

ode::State series_state(const Equation& eq, double b, double r) {
  double p2 = (eq.quintic * std::pow(b, 5) - b * b * b + eq.omega * b) / 6.0;
  return {b * r + p2 * r * r * r, b + 3.0 * p2 * r * r};
}

double shot_h_max(const Equation& eq) {
  if (eq.quintic == 0.0) return 0.05;
  return 0.05 * std::clamp(std::sqrt(0.05 / eq.omega), 1.0, 8.0);
}

// Bisection refinement of a sign change of f on [a, b].
double refine_root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 80; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

ShotResult shoot_core(const Equation& eq, ode::State y0, double r0, double r_max,
                      const ShotOptions& opt) {
  ode::StepOptions so;
  so.abs_tol = opt.abs_tol;
  so.rel_tol = opt.rel_tol;
  so.h_max = shot_h_max(eq);
  so.h_init = std::min(1e-4, so.h_max);

  const double cutoff = opt.decay_cutoff;
  const double rate = eq.rate();

  ShotResult res;
  std::optional<ShotOutcome> hit;

  auto rhs = [&](double r, ode::State y) -> ode::State {
    return {y[1], sigma_rhs(eq, r, y[0])};
  };
  auto monitor = [&](double r, const ode::State& y, double) -> ode::Control {
    if (r <= r0) return ode::Control::Continue;
    double s = y[0];
    double p = s / r;
    double dp = (r * y[1] - s) / (r * r);
    if (s <= 0.0) {
      hit = ShotOutcome::Overshoot;
      return ode::Control::Stop;
    }
    if (dp > 0.0 && p > 2.0 * cutoff) {
      hit = ShotOutcome::Undershoot;
      return ode::Control::Stop;
    }
    if (p <= cutoff && dp < 0.0) {
      double logder = y[1] / s;
      if (std::fabs(logder + rate) <= 0.25 * rate) {
        hit = ShotOutcome::Decayed;
        return ode::Control::Stop;
      }
    }
    return ode::Control::Continue;
  };

  ode::integrate(rhs, r0, y0, r_max, so, res.sigma, monitor);
  if (!hit)
    throw NoConvergence("shot reached r_max unclassified");

  res.outcome = *hit;
  const auto& tr = res.sigma;
  std::size_t n = tr.size();
  res.stop_radius = tr.r.back();
  if (n >= 2) {
    double a = tr.r[n - 2], b = tr.r[n - 1];
    switch (res.outcome) {
      case ShotOutcome::Overshoot:
        if (tr.y[n - 2][0] > 0.0)
          res.stop_radius = refine_root([&](double x) { return tr.value(x); }, a, b);
        break;
      case ShotOutcome::Undershoot:
        res.stop_radius = refine_root(
            [&](double x) { return x * tr.derivative(x) - tr.value(x); }, a, b);
        break;
      case ShotOutcome::Decayed:
        if (tr.value(a) / a > cutoff)
          res.stop_radius =
              refine_root([&](double x) { return tr.value(x) / x - cutoff; }, a, b);
        break;
    }
  }
  return res;
}

// Resume a certified shot past its stop to learn which way it would have
// left the soliton; used to keep bisecting when the bracket is still wide.
std::optional<ShotOutcome> probe_direction(const Equation& eq, const ShotResult& shot,
                                           double r_max, const ShotOptions& opt) {
  ode::StepOptions so;
  so.abs_tol = opt.abs_tol;
  so.rel_tol = opt.rel_tol;
  so.h_max = shot_h_max(eq);
  so.h_init = so.h_max * 1e-2;

  std::optional<ShotOutcome> hit;
  auto rhs = [&](double r, ode::State y) -> ode::State {
    return {y[1], sigma_rhs(eq, r, y[0])};
  };
  auto monitor = [&](double r, const ode::State& y, double) -> ode::Control {
    if (y[0] <= 0.0) {
      hit = ShotOutcome::Overshoot;
      return ode::Control::Stop;
    }
    if (r * y[1] - y[0] > 0.0) {
      hit = ShotOutcome::Undershoot;
      return ode::Control::Stop;
    }
    return ode::Control::Continue;
  };
  ode::Trajectory scratch;
  ode::integrate(rhs, shot.sigma.r.back(), shot.sigma.y.back(), r_max, so, scratch, monitor);
  return hit;
}

// Amplitude below which double-precision shooting can no longer separate the
// decaying branch from contamination of the growing one.  Near omega = 3/16
// the bound grows with the plateau factor exp(sqrt(W(b0)) * 0.433/t).
double certification_floor(const Equation& eq, double tail_cutoff) {
  double base = std::max(tail_cutoff, 1e-7);
  if (eq.quintic == 0.0) return base;
  double t = kOmegaSup - eq.omega;
  if (eq.omega <= 0.12) return base;
  double b0 = b0_bound(eq.omega);
  double w = 5.0 * std::pow(b0, 4) - 3.0 * b0 * b0 + eq.omega;
  double growth = std::sqrt(std::max(w, 0.0)) * 0.433 / t;
  double floor_p = 10.0 * b0 * std::sqrt(kEps * std::exp(std::min(growth, 60.0)));
  return std::min(1e-3, std::max(base, floor_p));
}

struct TailFit {
  double log_c_fit;    // least-squares constant over the last decade
  double log_c_graft;  // continuity-matched constant at the graft node
  double r_graft;
  double sigma_graft;
  double max_residual;  // max |log(rP) + rate r - log c| over the band
};

// Least squares of log(r P(r)) + rate r over the last trustworthy amplitude
// decade [3 floor, 30 floor]; the graft anchors continuity at its inner edge.
TailFit fit_tail(const ode::Trajectory& tr, double rate, double floor_amp) {
  double lo = 3.0 * floor_amp, hi = 30.0 * floor_amp;
  double sum = 0.0, dev = 0.0;
  std::size_t count = 0;
  std::size_t graft_idx = tr.size() - 1;
  bool have_graft = false;
  for (std::size_t j = 0; j < tr.size(); ++j) {
    double r = tr.r[j];
    if (r <= 0.0) continue;
    double p = tr.y[j][0] / r;
    if (p <= hi && !have_graft) {
      graft_idx = j;
      have_graft = true;
    }
    if (p >= lo && p <= hi) {
      sum += std::log(tr.y[j][0]) + rate * r;
      ++count;
    }
  }
  if (count < 8 || !have_graft)
    throw NoConvergence("tail fit band has too few trajectory nodes");
  TailFit fit;
  fit.log_c_fit = sum / double(count);
  for (std::size_t j = 0; j < tr.size(); ++j) {
    double r = tr.r[j];
    if (r <= 0.0) continue;
    double p = tr.y[j][0] / r;
    if (p >= lo && p <= hi)
      dev = std::max(dev, std::fabs(std::log(tr.y[j][0]) + rate * r - fit.log_c_fit));
  }
  fit.max_residual = dev;
  fit.r_graft = tr.r[graft_idx];
  fit.sigma_graft = tr.y[graft_idx][0];
  fit.log_c_graft = std::log(fit.sigma_graft) + rate * fit.r_graft;
  return fit;
}

SolitonProfile assemble_profile(const Equation& eq, ProfileKind kind, double b,
                                const ode::Trajectory& tr, double floor_amp,
                                double r_max, double tail_cutoff) {
  double rate = eq.rate();
  TailFit fit = fit_tail(tr, rate, floor_amp);

  SolitonProfile prof;
  prof.omega = eq.omega;
  prof.kind = kind;
  prof.center_value = b;
  prof.tail_log_c = fit.log_c_fit;
  prof.tail_constant = std::exp(std::min(fit.log_c_fit, 700.0));

  RadialGrid grid = RadialGrid::profile(r_max);
  prof.grid = grid.r();
  prof.values.resize(prof.grid.size());
  double p2 = (eq.quintic * std::pow(b, 5) - b * b * b + eq.omega * b) / 6.0;
  for (std::size_t j = 0; j < prof.grid.size(); ++j) {
    double r = prof.grid[j];
    if (r <= 0.0) {
      prof.values[j] = b;
    } else if (r < kRStart) {
      prof.values[j] = b + p2 * r * r;
    } else if (r <= fit.r_graft) {
      prof.values[j] = tr.value(r) / r;
    } else {
      prof.values[j] = std::exp(fit.log_c_graft - rate * r) / r;
    }
  }

  // Plateau profiles near omega = 3/16 vary by less than one ulp between
  // nearby nodes; clamp inversions at rounding scale, reject anything larger.
  for (std::size_t j = 1; j < prof.values.size(); ++j) {
    double prev = prof.values[j - 1];
    double v = prof.values[j];
    if (v > prev) {
      if (v - prev > 1e-12 * prev) {
#ifdef CQ_DEBUG_ASSEMBLE
        std::fprintf(stderr, "inversion j=%zu r=%.8g prev=%.17g v=%.17g diff=%.3g graft=%.6g\n", j,
                     prof.grid[j], prev, v, v - prev, fit.r_graft);
#endif
        throw NoConvergence("assembled profile is not positive decreasing");
      }
      prof.values[j] = prev;
    }
    if (!(prof.values[j] > 0.0))
      throw NoConvergence("assembled profile is not positive decreasing");
  }
  if (!(prof.values.back() > 0.0 && prof.values.back() < tail_cutoff))
    throw NoConvergence("profile tail did not reach the cutoff at r_max");
  return prof;
}

SolitonProfile solve_by_bisection(const Equation& eq, ProfileKind kind, double lo,
                                  double hi, double r_max, const SolveOptions& opt) {
  ShotOptions so;
  so.abs_tol = opt.abs_tol;
  so.rel_tol = opt.rel_tol;
  so.quintic_coefficient = eq.quintic;
  so.decay_cutoff = certification_floor(eq, opt.tail_cutoff);

  std::optional<std::pair<double, ShotResult>> best;
  std::size_t iter = 0;
  while (hi - lo >= opt.tol_b) {
    if (++iter > opt.max_iterations)
      throw NoConvergence("bisection exceeded max_iterations");
    double mid = 0.5 * (lo + hi);
    ShotResult s = shoot_core(eq, series_state(eq, mid, kRStart), kRStart, r_max, so);
    if (s.outcome == ShotOutcome::Overshoot) {
      hi = mid;
    } else if (s.outcome == ShotOutcome::Undershoot) {
      lo = mid;
    } else {
      auto dir = probe_direction(eq, s, r_max, so);
      best = {mid, std::move(s)};
      if (!dir) break;  // endpoints indistinguishable from here on
      if (*dir == ShotOutcome::Overshoot)
        hi = mid;
      else
        lo = mid;
    }
  }
  if (!best) {
    double mid = 0.5 * (lo + hi);
    ShotResult s = shoot_core(eq, series_state(eq, mid, kRStart), kRStart, r_max, so);
    if (s.outcome != ShotOutcome::Decayed)
      throw NoConvergence("no decayed shot within the bisection bracket");
    best = {mid, std::move(s)};
  }
  return assemble_profile(eq, kind, best->first, best->second.sigma, so.decay_cutoff,
                          r_max, opt.tail_cutoff);
}

// ---- Numerov-Newton continuation for the plateau regime ----
//
// Near omega = 3/16 the profile is a long plateau ending in a front whose
// radius grows like 0.433/t, t = 3/16 - omega.  Bisection shooting loses the
// front to growing-mode contamination there, so the grid problem is solved
// instead: Numerov discretization, damped Newton, and continuation in t with
// steps small enough that the front moves by well under its own width.

constexpr double kFrontSlope = 0.433;   // front radius ~ kFrontSlope / t
constexpr double kLadderStep = 0.9;     // increment of 1/t per continuation rung
constexpr double kNewtonH = 0.01;

bool newton_solve(const Equation& eq, double h, std::vector<double>& sigma) {
  std::size_t n = sigma.size() - 1;  // sigma[0] = sigma[n] = 0
  std::vector<double> f(n + 1), fp(n + 1), res(n + 1), dl(n + 1), dd(n + 1), du(n + 1),
      rhs_v(n + 1);
  double h2_12 = h * h / 12.0;

  auto residual = [&](const std::vector<double>& s) {
    for (std::size_t i = 0; i <= n; ++i) f[i] = sigma_rhs(eq, double(i) * h, s[i]);
    double nrm = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      res[i] = s[i - 1] - 2.0 * s[i] + s[i + 1] -
               h2_12 * (f[i - 1] + 10.0 * f[i] + f[i + 1]);
      nrm += res[i] * res[i];
    }
    return std::sqrt(nrm / double(n));
  };

  double scale = *std::max_element(sigma.begin(), sigma.end());
  double target = 1e-14 * std::max(1.0, scale);
  double nrm = residual(sigma);
  std::vector<double> step(n + 1, 0.0), trial(n + 1);
  for (int it = 0; it < 200; ++it) {
    if (nrm < target) return true;
    for (std::size_t i = 0; i <= n; ++i) fp[i] = dsigma_rhs(eq, double(i) * h, sigma[i]);
    for (std::size_t i = 1; i < n; ++i) {
      dl[i] = 1.0 - h2_12 * fp[i - 1];
      dd[i] = -2.0 - 10.0 * h2_12 * fp[i];
      du[i] = 1.0 - h2_12 * fp[i + 1];
      rhs_v[i] = -res[i];
    }
    // Thomas solve for the Newton step (Dirichlet ends pinned).
    for (std::size_t i = 2; i < n; ++i) {
      double m = dl[i] / dd[i - 1];
      dd[i] -= m * du[i - 1];
      rhs_v[i] -= m * rhs_v[i - 1];
    }
    step[n - 1] = rhs_v[n - 1] / dd[n - 1];
    for (std::size_t i = n - 2; i >= 1; --i) {
      step[i] = (rhs_v[i] - du[i] * step[i + 1]) / dd[i];
      if (i == 1) break;
    }
    // Trust cap: limit the implied front shift to a fraction of the front
    // width, else the linearized translation distorts the front shape.
    double max_slope = 0.0;
    for (std::size_t i = 0; i + 1 <= n; ++i)
      max_slope = std::max(max_slope, std::fabs(sigma[i + 1] - sigma[i]) / h);
    double max_step = 0.0;
    for (std::size_t i = 0; i <= n; ++i) max_step = std::max(max_step, std::fabs(step[i]));
    double lambda = 1.0;
    double cap = 0.25 * std::max(1.0, max_slope);
    if (max_step > cap) lambda = cap / max_step;

    bool accepted = false;
    for (int halvings = 0; halvings < 12; ++halvings) {
      for (std::size_t i = 0; i <= n; ++i) trial[i] = sigma[i] + lambda * step[i];
      double trial_nrm = residual(trial);
      if (trial_nrm < nrm || trial_nrm < target) {
        sigma.swap(trial);
        nrm = trial_nrm;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return false;
  }
  return nrm < target;
}

struct ContinuationState {
  double inv_t = 0.0;  // 1/t, t = 3/16 - omega
  std::size_t rung = 0;
  double h = 0.0;
  std::vector<double> sigma;
};

// Previous-rung profile shifted outward so the front lands near its new
// radius; the plateau is extended inward at its center value.
std::vector<double> shifted_guess(const ContinuationState& prev, double inv_t_new,
                                  double h_new, std::size_t n_new) {
  double shift = kFrontSlope * (inv_t_new - prev.inv_t);
  std::size_t n_prev = prev.sigma.size() - 1;
  auto p_prev = [&](double r) {
    if (r <= prev.h) return prev.sigma[1] / prev.h;
    double x = r / prev.h;
    std::size_t i = std::min(std::size_t(x), n_prev - 1);
    double w = x - double(i);
    double lo = (i == 0) ? prev.sigma[1] / prev.h : prev.sigma[i] / (double(i) * prev.h);
    double hi = prev.sigma[i + 1] / (double(i + 1) * prev.h);
    return lo * (1.0 - w) + hi * w;
  };
  std::vector<double> guess(n_new + 1, 0.0);
  for (std::size_t i = 1; i < n_new; ++i) {
    double r = double(i) * h_new;
    double rs = r - shift;
    guess[i] = r * ((rs <= 0.0) ? p_prev(prev.h) : p_prev(rs));
  }
  return guess;
}

bool advance_rung(ContinuationState& state, double inv_t_new, std::size_t rung_new,
                  int depth) {
  Equation eq{kOmegaSup - 1.0 / inv_t_new, 1.0};
  double r_max = default_r_max(eq.omega);
  std::size_t n = std::size_t(std::ceil(r_max / kNewtonH));
  double h = r_max / double(n);
  std::vector<double> sigma = shifted_guess(state, inv_t_new, h, n);
  if (newton_solve(eq, h, sigma)) {
    state.inv_t = inv_t_new;
    state.rung = rung_new;
    state.h = h;
    state.sigma = std::move(sigma);
    return true;
  }
  if (depth >= 8) return false;
  double mid = 0.5 * (state.inv_t + inv_t_new);
  return advance_rung(state, mid, state.rung, depth + 1) &&
         advance_rung(state, inv_t_new, rung_new, depth + 1);
}

ode::Trajectory trajectory_from_grid(const Equation& eq, double h,
                                     const std::vector<double>& sigma) {
  // Sixth-order first derivative on the uniform grid.
  static constexpr double c[4] = {-3.0 / 4.0, 3.0 / 20.0, -1.0 / 60.0, 0.0};
  std::size_t n = sigma.size();
  ode::Trajectory tr;
  tr.r.resize(n);
  tr.y.resize(n);
  tr.d2.resize(n);
  std::vector<double> ds(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n) {
      double acc = 0.0;
      for (int k = 1; k <= 3; ++k)
        acc += -c[k - 1] * (sigma[i + std::size_t(k)] - sigma[i - std::size_t(k)]);
      ds[i] = acc / h;
    }
  }
  // One-sided seventh-node stencils near the ends.
  std::vector<double> nodes(7);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n) continue;
    std::size_t lo = (i >= 3) ? n - 7 : 0;
    for (int k = 0; k < 7; ++k) nodes[std::size_t(k)] = double(lo + std::size_t(k)) * h;
    auto w = fd_weights(double(i) * h, nodes, 1);
    double acc = 0.0;
    for (int k = 0; k < 7; ++k) acc += w[std::size_t(k)] * sigma[lo + std::size_t(k)];
    ds[i] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double r = double(i) * h;
    tr.r[i] = r;
    tr.y[i] = {sigma[i], ds[i]};
    tr.d2[i] = sigma_rhs(eq, r, sigma[i]);
  }
  return tr;
}

constexpr double kNewtonBaseOmega = 0.15;

ContinuationState make_base_state(double omega, const SolveOptions& opt) {
  SolveOptions base_opt = opt;
  base_opt.r_max = 0.0;
  base_opt.method = SolveOptions::Method::Shooting;
  Equation eq{omega, 1.0};
  SolitonProfile base = solve_by_bisection(
      eq, ProfileKind::CubicQuintic, lower_bracket(omega) * (1.0 + 1e-9),
      b0_bound(omega), default_r_max(omega), base_opt);

  double r_max = default_r_max(omega);
  std::size_t n = std::size_t(std::ceil(r_max / kNewtonH));
  double h = r_max / double(n);
  std::vector<double> sigma(n + 1, 0.0);
  auto interp = [&](double r) {
    if (r >= base.grid.back()) return base.values.back();
    auto it = std::upper_bound(base.grid.begin(), base.grid.end(), r);
    std::size_t hi = std::size_t(it - base.grid.begin());
    double w = (r - base.grid[hi - 1]) / (base.grid[hi] - base.grid[hi - 1]);
    return base.values[hi - 1] * (1.0 - w) + base.values[hi] * w;
  };
  for (std::size_t i = 1; i < n; ++i) sigma[i] = double(i) * h * interp(double(i) * h);
  if (!newton_solve(eq, h, sigma))
    throw NoConvergence("base Newton polish failed");
  ContinuationState st;
  st.inv_t = 1.0 / (kOmegaSup - omega);
  st.rung = 0;
  st.h = h;
  st.sigma = std::move(sigma);
  return st;
}

SolitonProfile finish_newton(const ContinuationState& state, double omega,
                             const SolveOptions& opt) {
  Equation eq{omega, 1.0};
  ode::Trajectory tr = trajectory_from_grid(eq, state.h, state.sigma);
  double b = tr.y[0][1];  // P(0) = sigma'(0)
  double floor_amp = std::max(opt.tail_cutoff, 1e-8);
  return assemble_profile(eq, ProfileKind::CubicQuintic, b, tr, floor_amp, tr.r.back(),
                          opt.tail_cutoff);
}

}  // namespace

double b0_bound(double omega) {
  check_omega(omega);
  return std::sqrt(0.5 + 0.5 * std::sqrt(1.0 - 4.0 * omega));
}

double a0_bound(double omega) {
  check_omega(omega);
  return std::sqrt(0.5 - 0.5 * std::sqrt(1.0 - 4.0 * omega));
}

double lower_bracket(double omega) {
  check_omega(omega);
  return std::sqrt((3.0 - std::sqrt(9.0 - 48.0 * omega)) / 4.0);
}

double default_r_max(double omega) {
  double base = std::max(50.0, 40.0 / std::sqrt(omega));
  if (omega > 0.12 && omega < kOmegaSup) base += 0.6 / (kOmegaSup - omega);
  return base;
}

ShotResult shoot_once(double omega, double b, double r_max, const ShotOptions& opt) {
  Equation eq{omega, opt.quintic_coefficient};
  if (eq.quintic != 0.0) {
    check_omega(omega);
    if (!(b > lower_bracket(omega) && b <= b0_bound(omega)))
      throw BracketViolation("center value outside (u_minus, b0]");
  }
  if (!(r_max > kRStart)) throw Error("r_max must be positive");
  return shoot_core(eq, series_state(eq, b, kRStart), kRStart, r_max, opt);
}

SolitonProfile solve_ground_state(double omega, const SolveOptions& opt) {
  GroundStateSolver solver(opt);
  return solver.solve(omega);
}

SolitonProfile GroundStateSolver::solve(double omega) {
  check_omega(omega);
  bool use_newton =
      (opt_.method == SolveOptions::Method::Newton) ||
      (opt_.method == SolveOptions::Method::Auto && omega > kShootingOmegaMax);
  if (!use_newton) {
    Equation eq{omega, 1.0};
    double lo = lower_bracket(omega);
    double hi = b0_bound(omega);
    if (!(lo < hi)) throw BracketEmpty("empty shooting bracket");  // impossible below 3/16
    double r_max = opt_.r_max > 0.0 ? opt_.r_max : default_r_max(omega);
    return solve_by_bisection(eq, ProfileKind::CubicQuintic, lo * (1.0 + 1e-9), hi, r_max,
                              opt_);
  }

  double t_target = kOmegaSup - omega;
  double inv_t_base = 1.0 / (kOmegaSup - kNewtonBaseOmega);
  double inv_t_target = 1.0 / t_target;
  if (inv_t_target <= inv_t_base) {
    // Below the ladder foot; polish a bisection solve on the Numerov grid.
    ContinuationState st = make_base_state(omega, opt_);
    return finish_newton(st, omega, opt_);
  }
  // Rungs sit at 1/t = 1/t_base + k * kLadderStep; walk to the last rung
  // strictly before the target, then take one final step.
  std::size_t rungs =
      (inv_t_target > inv_t_base)
          ? std::size_t(std::max(0.0, std::floor((inv_t_target - inv_t_base) / kLadderStep)))
          : 0;

  if (!base_) {
    ContinuationState st = make_base_state(kNewtonBaseOmega, opt_);
    base_ = Rung{st.inv_t, st.rung, st.h, std::move(st.sigma)};
  }
  if (!last_ || last_->rung > rungs) last_ = *base_;

  ContinuationState st{last_->inv_t, last_->rung, last_->h, last_->sigma};
  while (st.rung < rungs) {
    double inv_t_next = inv_t_base + double(st.rung + 1) * kLadderStep;
    if (!advance_rung(st, inv_t_next, st.rung + 1, 0))
      throw NoConvergence("continuation Newton failed to converge");
    last_ = Rung{st.inv_t, st.rung, st.h, st.sigma};
  }
  if (inv_t_target > st.inv_t) {
    if (!advance_rung(st, inv_t_target, st.rung, 0))
      throw NoConvergence("continuation Newton failed at the target frequency");
  }
  return finish_newton(st, omega, opt_);
}

SolitonProfile solve_cubic_ground_state(const SolveOptions& opt) {
  Equation eq{1.0, 0.0};
  double lo = std::sqrt(2.0) * (1.0 + 1e-9);  // p(u) < 0 needs u^2 > 2
  double hi = 3.0;
  double r_max = opt.r_max > 0.0 ? opt.r_max : 50.0;
  ShotOptions so;
  so.abs_tol = opt.abs_tol;
  so.rel_tol = opt.rel_tol;
  so.quintic_coefficient = 0.0;
  so.decay_cutoff = std::max(opt.tail_cutoff, 1e-7);
  for (int i = 0; i < 12; ++i) {
    ShotResult s = shoot_core(eq, series_state(eq, hi, kRStart), kRStart, r_max, so);
    if (s.outcome == ShotOutcome::Overshoot) break;
    lo = hi;
    hi *= 1.5;
  }
  SolitonProfile prof =
      solve_by_bisection(eq, ProfileKind::CubicOnly, lo, hi, r_max, opt);
  prof.omega = 1.0;
  return prof;
}

}  // namespace cq::shooting

#include "cq/branch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "cq/errors.hpp"
#include "cq/parallel.hpp"

namespace cq::branch {

namespace {

constexpr double kOmegaSup = 3.0 / 16.0;

functionals::FunctionalSet solve_fs(double omega, const shooting::SolveOptions& opt) {
  return functionals::evaluate(shooting::solve_ground_state(omega, opt));
}

// Least-squares slope of y against x.
double regression_slope(std::span<const double> x, std::span<const double> y) {
  double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<double> default_sweep_omegas() {
  std::vector<double> omegas;
  omegas.reserve(200);
  for (int i = 0; i < 140; ++i)
    omegas.push_back(1e-3 * std::pow(0.12 / 1e-3, double(i) / 139.0));
  double step = (0.186 - 0.12) / 60.0;
  for (int k = 1; k <= 60; ++k) omegas.push_back(0.12 + double(k) * step);
  return omegas;
}

SweepResult sweep(std::span<const double> omegas, const SweepOptions& opt) {
  std::vector<double> ws(omegas.begin(), omegas.end());
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());

  SweepResult out;
  if (ws.empty()) return out;

  std::size_t n = ws.size();
  std::vector<std::optional<shooting::SolitonProfile>> profiles(n);
  std::vector<std::string> errors(n);

  std::size_t split = 0;  // rows below the shooting limit run as a parallel map
  while (split < n && ws[split] <= shooting::kShootingOmegaMax) ++split;

  unsigned jobs = opt.jobs == 0 ? default_jobs() : opt.jobs;
  parallel_for(split, jobs, [&](std::size_t i) {
    try {
      profiles[i] = shooting::solve_ground_state(ws[i], opt.solver);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  // High-frequency rows share one warm continuation ladder, in order.
  shooting::GroundStateSolver warm(opt.solver);
  for (std::size_t i = split; i < n; ++i) {
    try {
      profiles[i] = warm.solve(ws[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!profiles[i]) {
      out.failures.push_back("omega=" + std::to_string(ws[i]) + ": " + errors[i]);
      continue;
    }
    try {
      Row row{ws[i], functionals::evaluate(*profiles[i])};
      out.table.rows.push_back(row);
      if (opt.keep_profiles) out.profiles.push_back(std::move(*profiles[i]));
    } catch (const std::exception& e) {
      out.failures.push_back("omega=" + std::to_string(ws[i]) + ": " + e.what());
    }
  }
  return out;
}

DerivativeReport derivative_checks(const BranchTable& table) {
  if (table.rows.size() < 3) throw InsufficientRows("derivative checks need >= 3 rows");
  DerivativeReport rep;
  const auto& rows = table.rows;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    double xs[3] = {rows[k - 1].omega, rows[k].omega, rows[k + 1].omega};
    auto w = fd_weights(xs[1], std::span<const double>(xs, 3), 1);
    auto d_of = [&](auto get) {
      return w[0] * get(rows[k - 1].fs) + w[1] * get(rows[k].fs) + w[2] * get(rows[k + 1].fs);
    };
    double dg = d_of([](const functionals::FunctionalSet& f) { return f.kinetic; });
    double dm = d_of([](const functionals::FunctionalSet& f) { return f.mass; });
    double de = d_of([](const functionals::FunctionalSet& f) { return f.energy(); });

    double omega = rows[k].omega;
    double m = rows[k].fs.mass;
    rep.max_kinetic_mismatch =
        std::max(rep.max_kinetic_mismatch, std::fabs(dg - 1.5 * m) / (1.5 * m));
    double denom = std::max({std::fabs(de), std::fabs(0.5 * omega * dm),
                             1e-12 * rows[k].fs.kinetic});
    rep.max_energy_mismatch =
        std::max(rep.max_energy_mismatch, std::fabs(de + 0.5 * omega * dm) / denom);
    double beta = rows[k].fs.beta();
    if (!(dm < (3.0 * beta - 1.0) * m / (2.0 * omega))) rep.mass_slope_bound_ok = false;
    ++rep.interior_rows;
  }
  return rep;
}

namespace {

// Bisection on a scalar function of omega backed by fresh solves.
double refine_omega(double lo, double hi, const shooting::SolveOptions& solver,
                    const std::function<double(const functionals::FunctionalSet&)>& f) {
  double flo = f(solve_fs(lo, solver));
  for (int i = 0; i < 40 && hi - lo > 1e-10; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(solve_fs(mid, solver));
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SpecialPoints locate_special_points(const BranchTable& table,
                                    const shooting::SolveOptions& solver) {
  const auto& rows = table.rows;
  if (rows.size() < 5) throw InsufficientRows("special-point location needs >= 5 rows");
  SpecialPoints sp;

  auto bracket = [&](auto f) -> std::pair<double, double> {
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      if ((f(rows[k].fs) <= 0.0) != (f(rows[k + 1].fs) <= 0.0))
        return {rows[k].omega, rows[k + 1].omega};
    }
    throw NotBracketed("target not bracketed by the sweep");
  };

  {
    auto f = [](const functionals::FunctionalSet& fs) { return fs.beta() - 1.0 / 3.0; };
    auto [lo, hi] = bracket(f);
    sp.omega_beta_third = refine_omega(lo, hi, solver, f);
    sp.mass_beta_third = solve_fs(sp.omega_beta_third, solver).mass;
  }
  {
    auto f = [](const functionals::FunctionalSet& fs) { return fs.energy(); };
    auto [lo, hi] = bracket(f);
    sp.omega_zero_energy = refine_omega(lo, hi, solver, f);
    auto fs = solve_fs(sp.omega_zero_energy, solver);
    sp.mass_q1 = fs.mass;
    sp.kinetic_q1 = fs.kinetic;
  }
  {
    std::size_t m = 0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (rows[k].fs.mass < rows[m].fs.mass) m = k;
    if (m == 0 || m + 1 >= rows.size())
      throw NotBracketed("mass minimum sits at a sweep endpoint");
    // Parabolic fit over five points seeds a golden-section refinement on
    // freshly solved masses; differencing solver output directly is unstable.
    std::size_t lo_i = (m >= 2) ? m - 2 : 0;
    std::size_t hi_i = std::min(rows.size() - 1, m + 2);
    double sx = 0, sx2 = 0, sx3 = 0, sx4 = 0, sy = 0, sxy = 0, sx2y = 0, cnt = 0;
    for (std::size_t k = lo_i; k <= hi_i; ++k) {
      double x = rows[k].omega - rows[m].omega, y = rows[k].fs.mass;
      sx += x; sx2 += x * x; sx3 += x * x * x; sx4 += x * x * x * x;
      sy += y; sxy += x * y; sx2y += x * x * y;
      cnt += 1;
    }
    // Solve the 3x3 normal equations for y = a x^2 + b x + c.
    double m11 = sx4, m12 = sx3, m13 = sx2, m22 = sx2, m23 = sx, m33 = cnt;
    double z1 = sx2y, z2 = sxy, z3 = sy;
    double det = m11 * (m22 * m33 - m23 * m23) - m12 * (m12 * m33 - m23 * m13) +
                 m13 * (m12 * m23 - m22 * m13);
    double a = (z1 * (m22 * m33 - m23 * m23) - m12 * (z2 * m33 - m23 * z3) +
                m13 * (z2 * m23 - m22 * z3)) / det;
    double b = (m11 * (z2 * m33 - z3 * m23) - z1 * (m12 * m33 - m23 * m13) +
                m13 * (m12 * z3 - z2 * m13)) / det;
    double vertex = rows[m].omega - b / (2.0 * a);

    double lo = std::max(rows[m - 1].omega, vertex - (rows[m + 1].omega - rows[m - 1].omega));
    double hi = std::min(rows[m + 1].omega, vertex + (rows[m + 1].omega - rows[m - 1].omega));
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = solve_fs(x1, solver).mass, f2 = solve_fs(x2, solver).mass;
    for (int it = 0; it < 40 && hi - lo > 1e-8; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = solve_fs(x1, solver).mass;
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = solve_fs(x2, solver).mass;
      }
    }
    sp.omega_min_mass = 0.5 * (lo + hi);
    sp.min_mass = solve_fs(sp.omega_min_mass, solver).mass;
  }
  return sp;
}

SmallOmegaReport asymptotics_small_omega(const shooting::SolitonProfile& g,
                                         std::span<const double> omegas,
                                         const shooting::SolveOptions& solver) {
  functionals::FunctionalSet gfs = functionals::evaluate(g);
  SmallOmegaReport rep;
  rep.g_mass = gfs.mass;
  rep.g_sextic = gfs.sextic;
  rep.g_beta = gfs.beta();

  std::vector<double> log_w, log_res;
  for (double w : omegas) {
    auto fs = solve_fs(w, solver);
    double sw = std::sqrt(w);
    SmallOmegaReport::Point pt;
    pt.omega = w;
    pt.mass_dev_leading = std::fabs(fs.mass * sw - rep.g_mass) / rep.g_mass;
    pt.mass_dev_corrected =
        std::fabs(fs.mass * sw - (rep.g_mass + 0.5 * w * rep.g_sextic)) / rep.g_mass;
    pt.energy_dev_corrected =
        std::fabs(fs.energy() / sw - (0.5 * rep.g_mass - w * rep.g_sextic / 12.0)) /
        (0.5 * rep.g_mass);
    pt.beta_ratio_dev = std::fabs(fs.beta() / w - rep.g_beta) / rep.g_beta;
    rep.points.push_back(pt);
    log_w.push_back(std::log(w));
    log_res.push_back(std::log(std::max(pt.mass_dev_leading, 1e-300)));
  }
  if (log_w.size() >= 2) rep.residual_slope = regression_slope(log_w, log_res);
  return rep;
}

LargeOmegaReport asymptotics_large_omega(std::span<const double> omegas,
                                         const shooting::SolveOptions& solver) {
  LargeOmegaReport rep;
  std::vector<double> ws(omegas.begin(), omegas.end());
  std::sort(ws.begin(), ws.end());
  shooting::GroundStateSolver warm(solver);
  std::vector<double> lt, lm, le, lb, lg;
  for (double w : ws) {
    auto fs = functionals::evaluate(warm.solve(w));
    rep.rows.push_back({w, fs});
    double t = kOmegaSup - w;
    lt.push_back(std::log(t));
    lm.push_back(std::log(fs.mass));
    le.push_back(std::log(std::fabs(fs.energy())));
    lb.push_back(std::log(fs.beta()));
    lg.push_back(std::log(fs.kinetic));
  }
  rep.slope_mass = regression_slope(lt, lm);
  rep.slope_abs_energy = regression_slope(lt, le);
  rep.slope_beta = regression_slope(lt, lb);
  rep.slope_kinetic = regression_slope(lt, lg);
  return rep;
}

ConjectureScan conjecture_scan(const BranchTable& table) {
  ConjectureScan scan;
  const auto& rows = table.rows;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    if (rows[k + 1].fs.beta() <= rows[k].fs.beta()) {
      scan.beta_strictly_increasing = false;
      scan.warnings.push_back("WARN beta not increasing between omega=" +
                              std::to_string(rows[k].omega) + " and " +
                              std::to_string(rows[k + 1].omega));
    }
  }
  int prev_sign = 0;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    double diff = rows[k + 1].fs.mass - rows[k].fs.mass;
    int sign = (diff > 0.0) - (diff < 0.0);
    if (sign != 0 && prev_sign != 0 && sign != prev_sign) ++scan.mass_slope_sign_changes;
    if (sign != 0) prev_sign = sign;
  }
  if (scan.mass_slope_sign_changes != 1)
    scan.warnings.push_back("WARN mass slope changed sign " +
                            std::to_string(scan.mass_slope_sign_changes) +
                            " times (expected once)");
  return scan;
}

}  // namespace cq::branch

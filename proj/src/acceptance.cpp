#include "cq/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "cq/branch.hpp"
#include "cq/bumps.hpp"
#include "cq/dynamics.hpp"
#include "cq/functionals.hpp"
#include "cq/linearization.hpp"
#include "cq/region.hpp"
#include "cq/rescale.hpp"
#include "cq/shooting.hpp"

namespace cq::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

struct Harness {
  Options opt;
  std::vector<CriterionResult> results;
  std::ostream& out;

  // Shared state across criteria.
  branch::SweepResult sweep50;
  branch::BranchTable default_table;
  branch::SpecialPoints special;
  region::RegionModel model;
  bool model_ready = false;

  explicit Harness(const Options& o, std::ostream& os) : opt(o), out(os) {}

  template <class Fn>
  void criterion(int id, const std::string& name, Fn body) {
    CriterionResult res;
    res.id = id;
    res.name = name;
    auto t0 = Clock::now();
    try {
      bool ok = body(res.detail);
      res.passed = ok;
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail += std::string(" exception: ") + e.what();
    }
    res.seconds = seconds_since(t0);
    out << (res.passed ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << res.detail
        << " (" << fmt(res.seconds, 3) << " s)\n"
        << std::flush;
    results.push_back(res);
  }
};

bool check(std::string& detail, bool ok, const std::string& what) {
  if (!ok) detail += " FAILED{" + what + "}";
  return ok;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return v;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

std::vector<CriterionResult> run_all(const Options& opt, std::ostream& progress) {
  Harness h(opt, progress);

  // 1. Table reproduction at the three distinguished frequencies.
  h.criterion(1, "table-reproduction", [&](std::string& detail) {
    struct Ref {
      double omega, beta, mass, kinetic;
    };
    const Ref refs[3] = {{0.023926, 0.33333, 189.68, 10.211},
                         {0.025544, 0.36054, 189.46, 10.671},
                         {0.054735, 1.00000, 240.45, 19.741}};
    auto t0 = Clock::now();
    bool ok = true;
    for (const auto& ref : refs) {
      auto fs = functionals::evaluate(shooting::solve_ground_state(ref.omega));
      ok &= check(detail, std::fabs(fs.beta() - ref.beta) / ref.beta < 5e-4,
                  "beta(" + fmt(ref.omega) + ")=" + fmt(fs.beta()));
      ok &= check(detail, std::fabs(fs.mass - ref.mass) / ref.mass < 5e-4,
                  "M(" + fmt(ref.omega) + ")=" + fmt(fs.mass));
      ok &= check(detail, std::fabs(fs.kinetic - ref.kinetic) / ref.kinetic < 5e-4,
                  "G(" + fmt(ref.omega) + ")=" + fmt(fs.kinetic));
      detail += " [w=" + fmt(ref.omega) + " beta=" + fmt(fs.beta(), 6) +
                " M=" + fmt(fs.mass, 6) + " G=" + fmt(fs.kinetic, 6) + "]";
    }
    double secs = seconds_since(t0);
    ok &= check(detail, secs < 10.0, "runtime " + fmt(secs) + " s exceeds 10 s");
    return ok;
  });

  // 2. Thresholds from the full region build at default sweep density.
  h.criterion(2, "thresholds", [&](std::string& detail) {
    auto t0 = Clock::now();
    branch::SweepOptions sopt;
    sopt.jobs = h.opt.jobs;
    auto omegas = branch::default_sweep_omegas();
    auto res = branch::sweep(omegas, sopt);
    h.default_table = std::move(res.table);
    for (const auto& f : res.failures) detail += " WARN{" + f + "}";
    h.special = branch::locate_special_points(h.default_table);
    h.default_table.special_points = h.special;
    h.model = region::build_region(h.default_table, h.special);
    h.model_ready = true;
    double secs = seconds_since(t0);

    bool ok = true;
    double mq1 = h.model.thresholds.mass_q1;
    double mstar = h.model.thresholds.mass_star;
    double m0 = h.model.thresholds.m0;
    detail += " M(Q1)=" + fmt(mq1, 8) + " M*=" + fmt(mstar, 8) + " m0=" + fmt(m0, 8);
    ok &= check(detail, mq1 >= 239.5 && mq1 <= 241.5, "M(Q1) outside [239.5, 241.5]");
    ok &= check(detail, std::fabs(mstar - 185.10) <= 0.5, "M* not within 0.5 of 185.10");
    ok &= check(detail, std::fabs(m0 - 189.48) <= 0.5, "m0 not within 0.5 of 189.48");
    ok &= check(detail, secs < 300.0, "region build took " + fmt(secs) + " s");
    return ok;
  });

  // 3. Identity suite across a 50-point sweep.
  h.criterion(3, "identity-suite", [&](std::string& detail) {
    branch::SweepOptions sopt;
    sopt.jobs = h.opt.jobs;
    sopt.keep_profiles = true;
    auto omegas = log_spaced(1e-3, 0.18, 50);
    h.sweep50 = branch::sweep(omegas, sopt);
    bool ok = check(detail, h.sweep50.failures.empty(),
                    "sweep failures: " + fmt(double(h.sweep50.failures.size())));

    double worst = 0.0;
    for (std::size_t i = 0; i < h.sweep50.table.rows.size(); ++i) {
      const auto& row = h.sweep50.table.rows[i];
      auto poh = functionals::pohozaev_residuals(row.fs, row.omega);
      auto cid = functionals::compact_identities(row.fs, row.omega);
      double vp = std::fabs(row.fs.virial()) / row.fs.virial_scale();
      auto rp = rescale::rescaled_point(h.sweep50.profiles[i], row.fs);
      double beta_r = std::fabs(rp.fs.beta() - 1.0 / 3.0) * 3.0;
      double vr = std::fabs(rp.fs.virial()) / rp.fs.virial_scale();
      worst = std::max({worst, poh.res1, poh.res2, poh.res3, cid.id_mass,
                        cid.id_quartic, cid.id_energy, vp, beta_r, vr});
    }
    detail += " worst residual=" + fmt(worst, 3);
    ok &= check(detail, worst < 1e-6, "identity residual above 1e-6");
    return ok;
  });

  // 4. Derivative identities on a dense local sweep.
  h.criterion(4, "derivative-identities", [&](std::string& detail) {
    std::vector<double> omegas;
    for (int k = -3; k <= 3; ++k) omegas.push_back(0.05 + 1e-4 * double(k));
    branch::SweepOptions sopt;
    sopt.jobs = h.opt.jobs;
    auto res = branch::sweep(omegas, sopt);
    auto rep = branch::derivative_checks(res.table);
    detail += " dG mismatch=" + fmt(rep.max_kinetic_mismatch, 3) +
              " dE mismatch=" + fmt(rep.max_energy_mismatch, 3);
    bool ok = check(detail, rep.max_kinetic_mismatch < 1e-3, "dG/dw vs 1.5M above 1e-3");
    ok &= check(detail, rep.max_energy_mismatch < 1e-3,
                "dE/dw vs -(w/2) dM/dw above 1e-3");
    ok &= check(detail, rep.mass_slope_bound_ok, "mass slope bound violated");
    return ok;
  });

  // 5. Asymptotics at both ends of the frequency interval.
  h.criterion(5, "asymptotics", [&](std::string& detail) {
    auto g = shooting::solve_cubic_ground_state();
    std::vector<double> small = {1e-3, 2e-3, 4e-3};
    auto srep = branch::asymptotics_small_omega(g, small);
    double dev = srep.points.front().mass_dev_corrected;
    detail += " small: corrected mass dev=" + fmt(dev, 3);
    bool ok = check(detail, dev < 5e-3, "corrected mass deviation above 0.5%");

    std::vector<double> ts = log_spaced(0.0025, 0.0175, 8);
    std::vector<double> large;
    for (double t : ts) large.push_back(3.0 / 16.0 - t);
    auto lrep = branch::asymptotics_large_omega(large);
    detail += " large: slopes M=" + fmt(lrep.slope_mass, 3) +
              " |E|=" + fmt(lrep.slope_abs_energy, 3) + " beta=" + fmt(lrep.slope_beta, 3);
    ok &= check(detail, std::fabs(lrep.slope_mass + 3.0) <= 0.3, "mass slope not -3±0.3");
    ok &= check(detail, std::fabs(lrep.slope_abs_energy + 3.0) <= 0.3,
                "energy slope not -3±0.3");
    ok &= check(detail, std::fabs(lrep.slope_beta + 1.0) <= 0.2, "beta slope not -1±0.2");
    return ok;
  });

  // 6. Linearization across the sweep.
  h.criterion(6, "linearization", [&](std::string& detail) {
    bool ok = check(detail, !h.sweep50.profiles.empty(), "sweep profiles unavailable");
    if (!ok) return false;
    double worst_res = 0.0;
    for (const auto& prof : h.sweep50.profiles) {
      auto ds = linearization::solve_delta(prof);
      ok &= check(detail, ds.zero_count == 1,
                  "zero count " + fmt(double(ds.zero_count)) + " at w=" + fmt(prof.omega));
      ok &= check(detail,
                  ds.terminal == linearization::TerminalBehavior::DivergesNegative,
                  "terminal not DivergesNegative at w=" + fmt(prof.omega));
      if (ds.sign_change_radius) {
        double p_r1 = functionals::profile_value(prof, *ds.sign_change_radius);
        double a0 = shooting::a0_bound(prof.omega);
        ok &= check(detail, p_r1 > a0 && p_r1 < 1.0 / std::sqrt(2.0),
                    "P(r1)=" + fmt(p_r1) + " outside (a0, 1/sqrt2) at w=" + fmt(prof.omega));
      }
      auto zm = linearization::pprime_zero_mode(prof);
      worst_res = std::max(worst_res, zm.max_residual);
      ok &= check(detail, zm.f_positive, "-P' not positive at w=" + fmt(prof.omega));
      if (!ok) break;
    }
    detail += " worst zero-mode residual=" + fmt(worst_res, 3);
    ok &= check(detail, worst_res < 1e-4, "zero-mode residual above 1e-4");
    return ok;
  });

  // 7. The interpolation-inequality property suite.
  h.criterion(7, "gnh-property-suite", [&](std::string& detail) {
    const double alphas[4] = {1.0 / 3.0, 0.5, 1.0, 2.0};
    bool ok = true;
    double c1 = 0.0;
    for (double alpha : alphas) {
      auto gc = rescale::gnh_constant(alpha, h.sweep50.table);
      if (alpha == 1.0) c1 = gc.c_alpha;
      double opt_ratio = rescale::gnh_ratio(gc.optimizer, alpha, gc.c_alpha);
      ok &= check(detail, std::fabs(opt_ratio - 1.0) <= 1e-6,
                  "optimizer ratio " + fmt(opt_ratio, 9) + " at alpha=" + fmt(alpha));
      double worst = rescale::gnh_property_test(alpha, gc.c_alpha, 1000, h.opt.seed,
                                                h.opt.jobs);
      detail += " [alpha=" + fmt(alpha) + " C=" + fmt(gc.c_alpha, 6) +
                " worst=" + fmt(worst, 6) + "]";
      ok &= check(detail, worst <= 1.0 + 1e-6, "random trial beat the constant");
    }
    double mq1 = h.model_ready ? h.model.thresholds.mass_q1
                               : branch::locate_special_points(h.sweep50.table).mass_q1;
    double c1_ref = 8.0 / (3.0 * std::sqrt(mq1));
    ok &= check(detail, std::fabs(c1 - c1_ref) / c1_ref < 5e-3,
                "C_1=" + fmt(c1, 6) + " vs 8/(3 sqrt M(Q1))=" + fmt(c1_ref, 6));
    return ok;
  });

  // 8. Dynamics: soliton stationarity, conservation, virial identity, A_R bound.
  h.criterion(8, "dynamics", [&](std::string& detail) {
    auto t0 = Clock::now();
    dynamics::Evolver ev(4096, 100.0);
    bool ok = true;
    {
      auto prof = shooting::solve_ground_state(0.05);
      auto field = ev.from_profile(prof);
      auto u0 = field.field_values();
      dynamics::EvolveOptions eopt;
      auto res = dynamics::evolve(ev, std::move(field), 1.0, eopt);
      auto u1 = res.field.field_values();
      double drift = 0.0;
      for (std::size_t j = 0; j < u1.size(); ++j)
        drift = std::max(drift, std::fabs(std::abs(u1[j]) - std::abs(u0[j])));
      double m_drift = std::fabs(res.log.back().mass / res.log.front().mass - 1.0);
      double e_drift = std::fabs(res.log.back().energy - res.log.front().energy) /
                       std::fabs(res.log.front().energy);
      detail += " modulus drift=" + fmt(drift, 3) + " mass drift=" + fmt(m_drift, 3) +
                " energy drift=" + fmt(e_drift, 3);
      ok &= check(detail, drift < 1e-4, "soliton modulus drift above 1e-4");
      ok &= check(detail, m_drift < 1e-10, "mass drift above 1e-10");
      ok &= check(detail, e_drift < 1e-6, "energy drift above 1e-6");
      for (const auto& row : res.log) {
        double bound =
            4.0 * 40.0 * std::sqrt(row.mass * row.kinetic) * (1.0 + 1e-9);
        ok &= check(detail, std::fabs(row.truncated_momentum) <= bound,
                    "A_R bound violated at t=" + fmt(row.t));
      }
    }
    {
      // Generic in-region datum: mass 50 sits below the mass threshold.
      auto grid = ev.grid();
      std::vector<std::complex<double>> u(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) {
        double r = grid.r()[j];
        u[j] = std::exp(-r * r / 8.0);
      }
      auto fs = functionals::evaluate(grid, std::span<const std::complex<double>>(u));
      double scale = std::sqrt(50.0 / fs.mass);
      for (auto& v : u) v *= scale;
      fs = functionals::evaluate(grid, std::span<const std::complex<double>>(u));
      if (h.model_ready)
        ok &= check(detail, h.model.in_region(fs.mass, fs.energy()),
                    "generic datum not inside the region");
      dynamics::EvolveOptions eopt;
      eopt.observe_every = 10;  // log spacing 1e-2
      auto res = dynamics::evolve(ev, ev.make_field(u), 2.0, eopt);
      double defect = dynamics::virial_identity_check(res.log);
      detail += " virial defect=" + fmt(defect, 3);
      ok &= check(detail, defect < 1e-2, "virial identity defect above 1%");
      for (const auto& row : res.log) {
        ok &= check(detail, row.virial > 0.0, "virial not positive at t=" + fmt(row.t));
        double bound =
            4.0 * 40.0 * std::sqrt(row.mass * row.kinetic) * (1.0 + 1e-9);
        ok &= check(detail, std::fabs(row.truncated_momentum) <= bound,
                    "A_R bound violated at t=" + fmt(row.t));
      }
    }
    double secs = seconds_since(t0);
    ok &= check(detail, secs < 60.0, "dynamics runtime " + fmt(secs) + " s exceeds 60 s");
    return ok;
  });

  // 9. Virial positivity over seeded random samples inside the region.
  h.criterion(9, "virial-positivity-sampling", [&](std::string& detail) {
    if (!h.model_ready) {
      detail += " region model unavailable";
      return false;
    }
    auto sample = region::virial_positivity_sample(h.model, 10000, h.opt.seed, h.opt.jobs);
    detail += " retained=" + fmt(double(sample.retained)) +
              " min V=" + fmt(sample.min_virial, 6);
    bool ok = check(detail, sample.retained > 0, "no samples landed inside the region");
    ok &= check(detail, sample.min_virial > 0.0, "a retained sample had V <= 0");
    return ok;
  });

  return h.results;
}

}  // namespace cq::acceptance

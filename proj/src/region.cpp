#include "cq/region.hpp"

#include <algorithm>
#include <cmath>

#include "cq/bumps.hpp"
#include "cq/errors.hpp"
#include "cq/functionals.hpp"
#include "cq/parallel.hpp"
#include "cq/rescale.hpp"

namespace cq::region {

namespace {

constexpr double kMassStarFactor = 4.0 / (3.0 * 1.7320508075688772);

// All energies a curve attains at mass m (linear interpolation in mass on
// each bracketing segment), with the segment's interpolated omega.
void crossings(const std::vector<CurvePoint>& curve, double m,
               std::vector<std::pair<double, double>>& out) {
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    double m0 = curve[k].mass, m1 = curve[k + 1].mass;
    if ((m0 <= m && m <= m1) || (m1 <= m && m <= m0)) {
      if (m0 == m1) continue;
      double s = (m - m0) / (m1 - m0);
      out.emplace_back(curve[k].energy + s * (curve[k + 1].energy - curve[k].energy),
                       curve[k].omega + s * (curve[k + 1].omega - curve[k].omega));
    }
  }
}

functionals::FunctionalSet solve_fs(double omega, const shooting::SolveOptions& opt) {
  return functionals::evaluate(shooting::solve_ground_state(omega, opt));
}

double point_segment_distance(double px, double py, double ax, double ay, double bx,
                              double by) {
  double vx = bx - ax, vy = by - ay;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? std::clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0)
                        : 0.0;
  double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::hypot(dx, dy);
}

}  // namespace

double RegionModel::evmin_at(double m, bool* extrapolated) const {
  if (extrapolated) *extrapolated = false;
  if (m < thresholds.mass_star) return infinity();
  const auto& tab = evmin_table;
  if (m <= tab.front().mass) return tab.front().energy;
  if (m > tab.back().mass) {
    // Linear continuation from the last two points, flagged.
    if (extrapolated) *extrapolated = true;
    const auto& a = tab[tab.size() - 2];
    const auto& b = tab.back();
    double slope = (b.energy - a.energy) / (b.mass - a.mass);
    double e = b.energy + slope * (m - b.mass);
    return std::max(e, -3.0 * m / 32.0);  // the coercivity floor is exact
  }
  auto it = std::lower_bound(tab.begin(), tab.end(), m,
                             [](const EnvelopePoint& p, double x) { return p.mass < x; });
  std::size_t hi = std::size_t(it - tab.begin());
  const auto& a = tab[hi - 1];
  const auto& b = tab[hi];
  double s = (m - a.mass) / (b.mass - a.mass);
  return a.energy + s * (b.energy - a.energy);
}

bool RegionModel::in_region(double m, double e, double margin) const {
  if (!(m > 0.0) || !(e > 0.0)) return false;
  if (m >= thresholds.mass_q1 * (1.0 - margin)) return false;
  double ev = evmin_at(m);
  if (ev == infinity()) return true;
  return e < ev * (1.0 - margin);
}

bool RegionModel::in_complement(double m, double e) const {
  if (m < thresholds.mass_star) return false;
  return e >= evmin_at(m);
}

double RegionModel::distance_to_complement(double m, double e) const {
  if (in_complement(m, e)) return 0.0;
  double best = infinity();
  // Vertical ray above the envelope start encodes the jump at mass_star.
  {
    double ax = thresholds.mass_star, ay = thresholds.evmin_at_star;
    if (e >= ay)
      best = std::fabs(m - ax);
    else
      best = std::hypot(m - ax, e - ay);
  }
  for (std::size_t k = 0; k + 1 < evmin_table.size(); ++k) {
    best = std::min(best, point_segment_distance(m, e, evmin_table[k].mass,
                                                 evmin_table[k].energy,
                                                 evmin_table[k + 1].mass,
                                                 evmin_table[k + 1].energy));
  }
  // Continuation of the envelope past the table, so queries near the far end
  // do not see an artificial corner.
  {
    const auto& a = evmin_table[evmin_table.size() - 2];
    const auto& b = evmin_table.back();
    double slope = (b.energy - a.energy) / (b.mass - a.mass);
    double far_m = b.mass + 1e4;
    best = std::min(best, point_segment_distance(m, e, b.mass, b.energy, far_m,
                                                 b.energy + slope * 1e4));
  }
  return best;
}

RegionModel build_region(const branch::BranchTable& table,
                         const branch::SpecialPoints& special, const BuildOptions& opt) {
  RegionModel model;
  model.thresholds.mass_q1 = special.mass_q1;
  model.thresholds.mass_star = kMassStarFactor * special.mass_q1;
  model.thresholds.evmin_at_star =
      special.kinetic_q1 / (9.0 * std::sqrt(3.0));  // E(R) at beta = 1

  for (const auto& row : table.rows) {
    if (row.fs.beta() > 1.0 / 3.0)
      model.soliton_curve.push_back({row.omega, row.fs.mass, row.fs.energy()});
    auto rfs = rescale::rescaled_closed_form(row.fs);
    model.rescaled_curve.push_back({row.omega, rfs.mass, rfs.energy()});
  }
  // Pin the exact minimum of the rescaled curve (beta = 1, mass = mass_star).
  {
    CurvePoint star{special.omega_zero_energy, model.thresholds.mass_star,
                    model.thresholds.evmin_at_star};
    auto it = std::lower_bound(
        model.rescaled_curve.begin(), model.rescaled_curve.end(), star.omega,
        [](const CurvePoint& p, double w) { return p.omega < w; });
    model.rescaled_curve.insert(it, star);
  }

  if (model.soliton_curve.empty() || model.rescaled_curve.size() < 3)
    throw CurveGap("branch table too sparse to assemble the region");

  // Lower envelope over a mass grid.
  double m_lo = model.thresholds.mass_star;
  double m_hi = opt.mass_max;
  std::size_t n = opt.envelope_points;
  std::vector<std::pair<double, double>> cands;
  for (std::size_t i = 0; i < n; ++i) {
    double m = m_lo + (m_hi - m_lo) * double(i) / double(n - 1);
    cands.clear();
    std::size_t n_resc;
    crossings(model.rescaled_curve, m, cands);
    n_resc = cands.size();
    crossings(model.soliton_curve, m, cands);
    if (cands.empty()) {
      if (i == 0) continue;  // grid point epsilon below the pinned minimum
      throw CurveGap("no curve attains the requested mass");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < cands.size(); ++k)
      if (cands[k].first < cands[best].first) best = k;
    model.evmin_table.push_back({m, cands[best].first,
                                 best < n_resc ? Provenance::Rescaled
                                               : Provenance::Soliton,
                                 cands[best].second});
  }
  if (model.evmin_table.empty() || model.evmin_table.front().mass > m_lo)
    model.evmin_table.insert(model.evmin_table.begin(),
                             {m_lo, model.thresholds.evmin_at_star,
                              Provenance::Rescaled, special.omega_zero_energy});

  // Count transverse crossings of the two mass/energy curves (reported).
  {
    int count = 0;
    for (std::size_t k = 0; k + 1 < model.rescaled_curve.size(); ++k) {
      // Sample the sign of E_resc - E_sol at matching masses along the
      // rescaled curve where both curves are defined.
      double m = model.rescaled_curve[k].mass;
      double m2 = model.rescaled_curve[k + 1].mass;
      std::vector<std::pair<double, double>> a, b;
      crossings(model.soliton_curve, m, a);
      crossings(model.soliton_curve, m2, b);
      if (a.empty() || b.empty()) continue;
      auto emin = [](const std::vector<std::pair<double, double>>& v) {
        double e = v[0].first;
        for (auto& p : v) e = std::min(e, p.first);
        return e;
      };
      double d1 = model.rescaled_curve[k].energy - emin(a);
      double d2 = model.rescaled_curve[k + 1].energy - emin(b);
      if ((d1 <= 0.0) != (d2 <= 0.0)) ++count;
    }
    model.curve_crossings = count;
  }

  // Refine m0: the mass where the soliton branch first undercuts the
  // rescaled branch.  Bisection on mass; each energy query re-solves the
  // bracketing frequency to the requested mass.
  {
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k + 1 < model.evmin_table.size(); ++k) {
      if (model.evmin_table[k].provenance == Provenance::Rescaled &&
          model.evmin_table[k + 1].provenance == Provenance::Soliton) {
        lo = model.evmin_table[k].mass;
        hi = model.evmin_table[k + 1].mass;
        break;
      }
    }
    if (lo == 0.0) throw CurveGap("envelope never switches provenance");

    auto energy_on_curve = [&](const std::vector<CurvePoint>& curve, double m) {
      std::vector<std::pair<double, double>> cs;
      crossings(curve, m, cs);
      if (cs.empty()) throw CurveGap("refinement mass left the curve");
      double best_e = cs[0].first, best_w = cs[0].second;
      for (auto& c : cs)
        if (c.first < best_e) {
          best_e = c.first;
          best_w = c.second;
        }
      // Re-solve the frequency so the refined energy comes from a fresh
      // profile rather than from table interpolation.
      double w = best_w;
      for (int it = 0; it < 30; ++it) {
        auto fs = (&curve == &model.rescaled_curve)
                      ? rescale::rescaled_closed_form(solve_fs(w, opt.solver))
                      : solve_fs(w, opt.solver);
        double dm = fs.mass - m;
        if (std::fabs(dm) < 1e-7 * m) return fs.energy();
        // Secant step against the local table slope.
        double w_step = 1e-4 * (dm > 0 ? -1.0 : 1.0);
        auto fs2 = (&curve == &model.rescaled_curve)
                       ? rescale::rescaled_closed_form(solve_fs(w + w_step, opt.solver))
                       : solve_fs(w + w_step, opt.solver);
        double slope = (fs2.mass - fs.mass) / w_step;
        if (slope == 0.0) break;
        w -= dm / slope;
      }
      throw NoConvergence("mass-to-frequency refinement stalled");
    };

    double flo = energy_on_curve(model.soliton_curve, lo) -
                 energy_on_curve(model.rescaled_curve, lo);
    for (int i = 0; i < 24 && hi - lo > 1e-4; ++i) {
      double mid = 0.5 * (lo + hi);
      double fm = energy_on_curve(model.soliton_curve, mid) -
                  energy_on_curve(model.rescaled_curve, mid);
      if ((flo <= 0.0) == (fm <= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    model.thresholds.m0 = 0.5 * (lo + hi);
  }
  return model;
}

double feasible_emin(double m, const RegionModel& model) {
  if (m < 0.0) throw InfeasiblePair("negative mass");
  if (m <= model.thresholds.mass_q1) return 0.0;
  double e = model.evmin_at(m);
  if (e == RegionModel::infinity()) throw CurveGap("mass beyond the envelope");
  return std::max(e, -3.0 * m / 32.0);
}

double d_function(double m, double e, const RegionModel& model) {
  if (m < 0.0 || e < feasible_emin(m, model) - 1e-12 * (1.0 + std::fabs(e)))
    throw InfeasiblePair("(m, e) is not a feasible mass/energy pair");
  if (m == 0.0 && e == 0.0) return 0.0;
  if (model.in_complement(m, e)) return RegionModel::infinity();
  double dist = model.distance_to_complement(m, e);
  return e + (m + e) / dist;
}

VirialSample virial_positivity_sample(const RegionModel& model, std::size_t trials,
                                      std::uint64_t seed, unsigned jobs) {
  RadialGrid grid = bumps::bump_grid();
  bumps::BumpOptions bopt;
  bopt.boost_max = 3.0;

  VirialSample out;
  out.trials = trials;
  std::vector<double> virials(trials, RegionModel::infinity());
  unsigned j = jobs == 0 ? default_jobs() : jobs;
  parallel_for(trials, j, [&](std::size_t i) {
    auto u = bumps::random_radial(grid, seed, i, bopt);
    auto fs = functionals::evaluate(grid, std::span<const std::complex<double>>(u));
    if (model.in_region(fs.mass, fs.energy())) virials[i] = fs.virial();
  });
  for (double v : virials) {
    if (v == RegionModel::infinity()) continue;
    ++out.retained;
    out.min_virial = std::min(out.min_virial, v);
  }
  return out;
}

}  // namespace cq::region

#include "cq/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cq/errors.hpp"

namespace cq::functionals {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double rel_diff(double a, double b) {
  double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale == 0.0) return 0.0;
  return std::fabs(a - b) / scale;
}

struct Integrands {
  std::vector<double> f2, f4, f6, fg;
};

template <class T>
Integrands build_integrands(const RadialGrid& grid, std::span<const T> values) {
  std::size_t n = values.size();
  Integrands w;
  w.f2.resize(n);
  w.f4.resize(n);
  w.f6.resize(n);
  w.fg.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double m2 = std::norm(std::complex<double>(values[j]));
    w.f2[j] = m2;
    w.f4[j] = m2 * m2;
    w.f6[j] = m2 * m2 * m2;
  }
  auto dv = grid.derivative(values);
  for (std::size_t j = 0; j < n; ++j)
    w.fg[j] = std::norm(std::complex<double>(dv[j]));
  return w;
}

template <class T>
FunctionalSet evaluate_impl(const RadialGrid& grid, std::span<const T> values,
                            const std::optional<TailModel>& tail) {
  if (values.size() != grid.size())
    throw Error("functional evaluation: value count does not match grid");
  Integrands w = build_integrands(grid, values);

  FunctionalSet fs;
  fs.mass = grid.integrate(w.f2);
  fs.kinetic = grid.integrate(w.fg);
  fs.quartic = grid.integrate(w.f4);
  fs.sextic = grid.integrate(w.f6);

  const double halves[4] = {grid.integrate_halved(w.f2), grid.integrate_halved(w.fg),
                            grid.integrate_halved(w.f4), grid.integrate_halved(w.f6)};
  const double fulls[4] = {fs.mass, fs.kinetic, fs.quartic, fs.sextic};
  double scale = std::max({std::fabs(fulls[0]), std::fabs(fulls[1]), std::fabs(fulls[2]),
                           std::fabs(fulls[3])});
  for (int k = 0; k < 4; ++k) {
    if (scale > 0.0 && std::fabs(fulls[k] - halves[k]) > 1e-6 * scale)
      throw GridTooCoarse("quadrature changed by more than 1e-6 under halving");
  }

  if (tail) {
    double r_n = grid.r_max();
    double kappa = tail->rate;
    double c2 = std::exp(2.0 * (tail->log_c - kappa * r_n));  // (c e^{-k r_n})^2
    fs.mass += kFourPi * c2 / (2.0 * kappa);
    fs.kinetic += kFourPi * c2 * (0.5 * kappa + 1.0 / r_n);
  }
  return fs;
}

}  // namespace

FunctionalSet evaluate(const RadialGrid& grid, std::span<const std::complex<double>> values,
                       const std::optional<TailModel>& tail) {
  return evaluate_impl(grid, values, tail);
}

FunctionalSet evaluate(const RadialGrid& grid, std::span<const double> values,
                       const std::optional<TailModel>& tail) {
  return evaluate_impl(grid, values, tail);
}

RadialGrid profile_grid(const shooting::SolitonProfile& profile) {
  return RadialGrid::profile(profile.grid.back());
}

FunctionalSet evaluate(const shooting::SolitonProfile& profile) {
  RadialGrid grid = profile_grid(profile);
  TailModel tail{profile.tail_log_c, profile.decay_rate()};
  return evaluate(grid, std::span<const double>(profile.values), tail);
}

PohozaevResiduals pohozaev_residuals(const FunctionalSet& fs, double omega) {
  double g = fs.kinetic, m = fs.mass, l4 = fs.quartic, l6 = fs.sextic;
  PohozaevResiduals r{};
  double s1 = g + l6 + l4 + omega * m;
  r.res1 = (s1 == 0.0) ? 0.0 : std::fabs(g + l6 - l4 + omega * m) / s1;
  double s2 = g / 6.0 + l6 / 6.0 + l4 / 4.0 + omega * m / 2.0;
  r.res2 = (s2 == 0.0) ? 0.0
                       : std::fabs(g / 6.0 + l6 / 6.0 - l4 / 4.0 + omega * m / 2.0) / s2;
  double s3 = l4 + 4.0 * omega * m;
  r.res3 = (s3 == 0.0) ? 0.0 : std::fabs(l4 - 4.0 * omega * m) / s3;
  return r;
}

CompactIdentityResiduals compact_identities(const FunctionalSet& fs, double omega) {
  double g = fs.kinetic, beta = fs.beta();
  CompactIdentityResiduals out{};
  out.id_mass = rel_diff(fs.mass, (beta + 1.0) * g / (3.0 * omega));
  out.id_quartic = rel_diff(fs.quartic, 4.0 * (beta + 1.0) * g / 3.0);
  double scale = std::fabs(fs.energy()) + g / 6.0;
  out.id_energy =
      (scale == 0.0) ? 0.0 : std::fabs(fs.energy() - (1.0 - beta) * g / 6.0) / scale;
  return out;
}

namespace {

template <class T>
double coercivity_impl(const RadialGrid& grid, std::span<const T> values) {
  FunctionalSet fs = evaluate_impl(grid, values, std::nullopt);
  std::vector<double> f(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    double m2 = std::norm(std::complex<double>(values[j]));
    double d = m2 - 0.75;
    f[j] = m2 * d * d;
  }
  double rhs = 0.5 * fs.kinetic + grid.integrate(f) / 6.0;
  double lhs = fs.energy() + (3.0 / 32.0) * fs.mass;
  return rel_diff(lhs, rhs);
}

}  // namespace

double coercivity_identity(const RadialGrid& grid,
                           std::span<const std::complex<double>> values) {
  return coercivity_impl(grid, values);
}

double coercivity_identity(const RadialGrid& grid, std::span<const double> values) {
  return coercivity_impl(grid, values);
}

namespace {

template <class T>
std::vector<std::complex<double>> boost_impl(const RadialGrid& grid,
                                             std::span<const T> values, double xi_mag) {
  if (xi_mag < 0.0) throw Error("radial boost: xi must be nonnegative");
  std::vector<std::complex<double>> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    double phase = xi_mag * grid.r()[j];
    out[j] = std::complex<double>(values[j]) *
             std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> radial_boost(const RadialGrid& grid,
                                               std::span<const std::complex<double>> values,
                                               double xi_mag) {
  return boost_impl(grid, values, xi_mag);
}

std::vector<std::complex<double>> radial_boost(const RadialGrid& grid,
                                               std::span<const double> values,
                                               double xi_mag) {
  return boost_impl(grid, values, xi_mag);
}

double profile_value(const shooting::SolitonProfile& profile, double r) {
  const auto& gr = profile.grid;
  const auto& gv = profile.values;
  if (r <= 0.0) return profile.center_value;
  if (r >= gr.back()) return profile.tail_value(r);
  auto it = std::upper_bound(gr.begin(), gr.end(), r);
  std::size_t hi = std::size_t(it - gr.begin());
  // Four-point Lagrange around the bracketing interval.
  std::size_t lo = (hi >= 2) ? hi - 2 : 0;
  if (lo + 4 > gr.size()) lo = gr.size() - 4;
  double acc = 0.0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (a != b) w *= (r - gr[b]) / (gr[a] - gr[b]);
    acc += w * gv[a];
  }
  return acc;
}

}  // namespace cq::functionals

#include "cq/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cq/errors.hpp"
#include "cq/functionals.hpp"

namespace cq::dynamics {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

std::vector<std::complex<double>> RadialField::field_values() const {
  std::size_t n = intervals();
  double h = spacing();
  std::vector<std::complex<double>> u(n + 1);
  for (std::size_t j = 1; j <= n; ++j) u[j] = w[j] / (double(j) * h);
  u[0] = (8.0 * w[1] - w[2]) / (6.0 * h);  // w odd in r: w = u0 r + a r^3 + ...
  return u;
}

struct Evolver::Plans {
  fftw_plan forward = nullptr;  // RODFT00 in place on a scratch buffer
  std::vector<double> scratch_re, scratch_im;
  std::vector<double> eigen;  // (pi k / R)^2

  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
  }
};

Evolver::Evolver(std::size_t intervals, double r_domain)
    : n_(intervals),
      r_domain_(r_domain),
      grid_(RadialGrid::uniform(r_domain, intervals)),
      plans_(std::make_unique<Plans>()) {
  std::size_t interior = n_ - 1;
  plans_->scratch_re.resize(interior);
  plans_->scratch_im.resize(interior);
  // RODFT00 is its own inverse up to the factor 2 n_.  FFTW_ESTIMATE keeps
  // plan selection deterministic across runs.
  plans_->forward = fftw_plan_r2r_1d(int(interior), plans_->scratch_re.data(),
                                     plans_->scratch_re.data(), FFTW_RODFT00,
                                     FFTW_ESTIMATE);
  plans_->eigen.resize(interior);
  for (std::size_t k = 0; k < interior; ++k) {
    double kappa = std::numbers::pi * double(k + 1) / r_domain_;
    plans_->eigen[k] = kappa * kappa;
  }
}

Evolver::~Evolver() = default;

RadialField Evolver::make_field(std::span<const std::complex<double>> u_values) const {
  if (u_values.size() != n_ + 1) throw Error("field values do not match the grid");
  RadialField f;
  f.r_domain = r_domain_;
  f.w.resize(n_ + 1);
  double h = r_domain_ / double(n_);
  for (std::size_t j = 0; j <= n_; ++j) f.w[j] = u_values[j] * (double(j) * h);
  f.w[0] = 0.0;
  f.w[n_] = 0.0;
  return f;
}

RadialField Evolver::from_profile(const shooting::SolitonProfile& profile) const {
  std::vector<std::complex<double>> u(n_ + 1);
  double h = r_domain_ / double(n_);
  for (std::size_t j = 0; j <= n_; ++j)
    u[j] = functionals::profile_value(profile, double(j) * h);
  return make_field(u);
}

void Evolver::step(RadialField& field, double dt) const {
  if (!(dt > 0.0) || dt > kDtMax * (1.0 + 1e-12))
    throw Error("dt outside (0, dt_max]");
  if (field.w.size() != n_ + 1) throw Error("field does not match this evolver");

  double h = field.spacing();
  auto half_nonlinear = [&](double tau) {
    for (std::size_t j = 1; j < n_; ++j) {
      double r = double(j) * h;
      double m2 = std::norm(field.w[j]) / (r * r);
      double phase = tau * (m2 - m2 * m2);
      field.w[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
  };

  half_nonlinear(0.5 * dt);

  std::size_t interior = n_ - 1;
  auto& re = plans_->scratch_re;
  auto& im = plans_->scratch_im;
  for (std::size_t j = 0; j < interior; ++j) {
    re[j] = field.w[j + 1].real();
    im[j] = field.w[j + 1].imag();
  }
  fftw_execute_r2r(plans_->forward, re.data(), re.data());
  fftw_execute_r2r(plans_->forward, im.data(), im.data());
  double norm = 1.0 / (2.0 * double(n_));
  for (std::size_t k = 0; k < interior; ++k) {
    double phase = -plans_->eigen[k] * dt;  // d/dt w_hat = -i kappa^2 w_hat
    double c = std::cos(phase), s = std::sin(phase);
    double a = re[k], b = im[k];
    re[k] = (a * c - b * s) * norm;
    im[k] = (a * s + b * c) * norm;
  }
  fftw_execute_r2r(plans_->forward, re.data(), re.data());
  fftw_execute_r2r(plans_->forward, im.data(), im.data());
  for (std::size_t j = 0; j < interior; ++j)
    field.w[j + 1] = std::complex<double>(re[j], im[j]);

  half_nonlinear(0.5 * dt);
  field.time += dt;

  double wall = std::abs(field.w[n_ - 1]);
  double peak = 0.0;
  for (const auto& v : field.w) peak = std::max(peak, std::abs(v));
  if (peak > 0.0 && wall / peak > 1e-4) field.boundary_warning = true;

  for (const auto& v : field.w)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonFinite("field became non-finite during a step");
}

double cutoff_profile(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  double t = s - 1.0;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double truncated_virial(const Evolver& ev, const RadialField& field, double r_trunc) {
  if (!(r_trunc > 0.0) || r_trunc >= 0.5 * field.r_domain)
    throw Error("truncation radius must sit inside half the domain");
  auto u = field.field_values();
  auto du = ev.grid().derivative(std::span<const std::complex<double>>(u));
  std::vector<double> f(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    double r = ev.grid().r()[j];
    f[j] = 2.0 * cutoff_profile(r / r_trunc) *
           std::imag(std::conj(u[j]) * (r * du[j]));
  }
  return ev.grid().integrate(f);
}

Observables Evolver::observe(const RadialField& field, double truncation_radius) const {
  auto u = field.field_values();
  auto fs = functionals::evaluate(grid_, std::span<const std::complex<double>>(u));
  Observables o;
  o.t = field.time;
  o.mass = fs.mass;
  o.energy = fs.energy();
  o.virial = fs.virial();
  o.kinetic = fs.kinetic;

  auto du = grid_.derivative(std::span<const std::complex<double>>(u));
  std::vector<double> f(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    double r = grid_.r()[j];
    f[j] = 2.0 * std::imag(std::conj(u[j]) * (r * du[j]));
  }
  o.weighted_momentum = grid_.integrate(f);
  o.truncated_momentum = truncated_virial(*this, field, truncation_radius);
  for (const auto& v : u) o.sup_abs = std::max(o.sup_abs, std::abs(v));
  return o;
}

EvolveResult evolve(const Evolver& ev, RadialField initial, double t_end,
                    const EvolveOptions& opt) {
  EvolveResult out;
  out.field = std::move(initial);
  out.log.push_back(ev.observe(out.field, opt.truncation_radius));
  std::size_t steps = std::size_t(std::ceil((t_end - out.field.time) / opt.dt - 1e-12));
  for (std::size_t s = 0; s < steps; ++s) {
    ev.step(out.field, opt.dt);
    if ((s + 1) % opt.observe_every == 0 || s + 1 == steps)
      out.log.push_back(ev.observe(out.field, opt.truncation_radius));
  }
  return out;
}

double virial_identity_check(std::span<const Observables> log) {
  if (log.size() < 3) throw InsufficientRows("virial check needs >= 3 log rows");
  double floor = 1e-8 * log.front().kinetic;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < log.size(); ++k) {
    double dt_minus = log[k].t - log[k - 1].t;
    double dt_plus = log[k + 1].t - log[k].t;
    if (std::fabs(dt_plus - dt_minus) > 1e-9 * dt_plus)
      throw InsufficientRows("virial check needs uniformly spaced log rows");
    double da = (log[k + 1].weighted_momentum - log[k - 1].weighted_momentum) /
                (dt_plus + dt_minus);
    double target = 4.0 * log[k].virial;
    worst = std::max(worst, std::fabs(da - target) / (std::fabs(target) + floor));
  }
  return worst;
}

}  // namespace cq::dynamics

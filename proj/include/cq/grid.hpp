#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cq {

/// Fixed radial grid with 4*pi*r^2-weighted quadrature.
///
/// Layout is a geometric section on [0, r_switch] (trapezoid weights, dense
/// near the origin) followed by a uniform section on [r_switch, r_max]
/// (composite Simpson).  A pure uniform layout (whole-range Simpson) is used
/// for time evolution and random test functions.
class RadialGrid {
 public:
  static constexpr std::size_t kProfilePoints = 16384;

  /// Geometric-then-uniform layout used for soliton profiles.
  static RadialGrid profile(double r_max);

  /// Uniform nodes r_j = j * (r_max / n_intervals); n_intervals % 4 == 0.
  static RadialGrid uniform(double r_max, std::size_t n_intervals);

  const std::vector<double>& r() const { return r_; }
  std::size_t size() const { return r_.size(); }
  double r_max() const { return r_.back(); }
  std::size_t uniform_begin() const { return uniform_begin_; }

  /// Integral of f(r) 4*pi*r^2 dr over [0, r_max] from nodal values.
  double integrate(std::span<const double> f) const;
  /// Same quadrature on every other node; used for the Richardson check.
  double integrate_halved(std::span<const double> f) const;

  /// Fourth-order finite-difference d/dr of nodal values.
  std::vector<double> derivative(std::span<const double> f) const;
  std::vector<std::complex<double>> derivative(std::span<const std::complex<double>> f) const;

  /// Second derivative by centered sixth-order stencils (residual checks).
  std::vector<double> second_derivative(std::span<const double> f) const;

 private:
  std::vector<double> r_;
  std::size_t uniform_begin_ = 0;
  std::vector<double> w_full_;    // quadrature weights including 4*pi*r^2
  std::vector<double> w_halved_;  // zero at skipped nodes

  void build_weights();
};

/// Finite-difference weights for the m-th derivative at x0 from the given
/// nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

}  // namespace cq

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cq/branch.hpp"
#include "cq/functionals.hpp"
#include "cq/shooting.hpp"

namespace cq::rescale {

/// The unique rescaling a P(lambda x) of a ground state with beta = 1/3 and
/// zero virial; the boundary family of the scattering region.
struct RescaledPoint {
  double omega = 0.0;
  double amplitude = 0.0;  // a
  double dilation = 0.0;   // lambda
  functionals::FunctionalSet fs;  // quadrature of the rescaled profile
};

/// Closed-form functionals of the rescaled soliton from the branch row alone.
functionals::FunctionalSet rescaled_closed_form(const functionals::FunctionalSet& fs);

/// Quadrature-backed rescaled point; throws if the quadrature disagrees with
/// the closed forms by more than 1e-6 relative, or BetaNonpositive.
RescaledPoint rescaled_point(const shooting::SolitonProfile& profile,
                             const functionals::FunctionalSet& fs);

/// Smallest dilation lambda > 1 driving the virial to zero for input with
/// V < 0, or V = 0 with beta <= 1/3.  Returns (lambda, transformed set);
/// the transform keeps mass, raises the kinetic term, lowers the energy.
std::pair<double, functionals::FunctionalSet> rescale_to_zero_virial(
    const functionals::FunctionalSet& fs);

/// Raise the mass of a zero-virial state to m_target along zero virial; the
/// energy drops by at least (m_target - M) G / (6 M).
functionals::FunctionalSet mass_pump(const functionals::FunctionalSet& fs, double m_target);

struct GnhConstant {
  double alpha = 0.0;
  double omega_opt = 0.0;
  double c_alpha = 0.0;
  functionals::FunctionalSet optimizer;
};

/// Optimal interpolation constant from the optimizing soliton with
/// beta(omega) = alpha; with several roots the largest constant wins.
GnhConstant gnh_constant(double alpha, const branch::BranchTable& table,
                         const shooting::SolveOptions& solver = {});

/// ratio = |u|_4^4 / (C |u|_2 |u|_6^{3a/(1+a)} |grad u|_2^{3/(1+a)}).
double gnh_ratio(const functionals::FunctionalSet& fs, double alpha, double c_alpha);

/// Seeded random radial trials; the inequality holds iff the returned worst
/// ratio stays at or below one.
double gnh_property_test(double alpha, double c_alpha, std::size_t trials,
                         std::uint64_t seed, unsigned jobs = 0);

struct ComparisonRow {
  double gamma, alpha;
  const char* kind;  // "kinetic", "mass", "mass2", "energy"
  double lhs, rhs;
  bool ok;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  bool all_ok = true;
};

/// Pairwise inequalities between optimizing solitons on their stated ranges.
ComparisonReport branch_comparisons(const branch::BranchTable& table,
                                    std::span<const double> alphas,
                                    const shooting::SolveOptions& solver = {});

}  // namespace cq::rescale

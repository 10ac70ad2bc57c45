#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cq/grid.hpp"

namespace cq::bumps {

/// Seeded radial test functions: 1..4 origin-centered Gaussian bumps with
/// random amplitudes, widths, and phases, optionally radially boosted.
struct BumpOptions {
  double width_min = 0.5;
  double width_max = 20.0;
  double amp_max = 1.0;
  double boost_max = 0.0;  // xi drawn uniformly from [0, boost_max]
  int max_bumps = 4;
};

/// Stream index `index` of the generator seeded with `seed`; identical
/// (seed, index, options) always produce the same function.
std::vector<std::complex<double>> random_radial(const RadialGrid& grid, std::uint64_t seed,
                                                std::uint64_t index,
                                                const BumpOptions& opt = {});

/// Uniform grid sized for the widest bumps.
RadialGrid bump_grid();

inline constexpr std::uint64_t kDefaultSeed = 2718;

}  // namespace cq::bumps

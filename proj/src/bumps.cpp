#include "cq/bumps.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace cq::bumps {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RadialGrid bump_grid() { return RadialGrid::uniform(160.0, 4096); }

std::vector<std::complex<double>> random_radial(const RadialGrid& grid, std::uint64_t seed,
                                                std::uint64_t index, const BumpOptions& opt) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  std::uniform_int_distribution<int> count_dist(1, opt.max_bumps);
  std::uniform_real_distribution<double> amp_dist(0.05 * opt.amp_max, opt.amp_max);
  std::uniform_real_distribution<double> logw_dist(std::log(opt.width_min),
                                                   std::log(opt.width_max));
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);

  int n_bumps = count_dist(rng);
  std::vector<double> amp(std::size_t(n_bumps)), width(std::size_t(n_bumps)),
      phase(std::size_t(n_bumps));
  for (int k = 0; k < n_bumps; ++k) {
    amp[std::size_t(k)] = amp_dist(rng);
    width[std::size_t(k)] = std::exp(logw_dist(rng));
    phase[std::size_t(k)] = phase_dist(rng);
  }
  double xi = 0.0;
  if (opt.boost_max > 0.0) {
    std::uniform_real_distribution<double> xi_dist(0.0, opt.boost_max);
    xi = xi_dist(rng);
  }

  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double r = grid.r()[j];
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < n_bumps; ++k) {
      double w = width[std::size_t(k)];
      double envelope = amp[std::size_t(k)] * std::exp(-r * r / (2.0 * w * w));
      acc += envelope * std::complex<double>(std::cos(phase[std::size_t(k)]),
                                             std::sin(phase[std::size_t(k)]));
    }
    if (xi > 0.0) acc *= std::complex<double>(std::cos(xi * r), std::sin(xi * r));
    out[j] = acc;
  }
  return out;
}

}  // namespace cq::bumps

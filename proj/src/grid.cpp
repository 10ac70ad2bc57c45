#include "cq/grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cq {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Trapezoid weights over nodes [lo, hi] added into w.
void add_trapezoid(const std::vector<double>& r, std::size_t lo, std::size_t hi,
                   std::vector<double>& w) {
  for (std::size_t j = lo; j < hi; ++j) {
    double h = r[j + 1] - r[j];
    w[j] += 0.5 * h;
    w[j + 1] += 0.5 * h;
  }
}

// Composite Simpson over nodes [lo, hi]; (hi - lo) must be even and spacing
// uniform.
void add_simpson(const std::vector<double>& r, std::size_t lo, std::size_t hi,
                 std::vector<double>& w) {
  assert((hi - lo) % 2 == 0);
  double h = r[lo + 1] - r[lo];
  for (std::size_t j = lo; j + 2 <= hi; j += 2) {
    w[j] += h / 3.0;
    w[j + 1] += 4.0 * h / 3.0;
    w[j + 2] += h / 3.0;
  }
}

}  // namespace

RadialGrid RadialGrid::profile(double r_max) {
  constexpr std::size_t n_geo = 2047;    // nodes 1..n_geo form the geometric section
  constexpr double r_geo_min = 1e-4;
  constexpr double r_switch = 1.0;
  if (r_max <= 2.0 * r_switch) throw std::invalid_argument("profile grid: r_max too small");

  RadialGrid g;
  g.r_.reserve(kProfilePoints);
  g.r_.push_back(0.0);
  double ratio = std::pow(r_switch / r_geo_min, 1.0 / double(n_geo - 1));
  for (std::size_t j = 0; j < n_geo; ++j)
    g.r_.push_back(r_geo_min * std::pow(ratio, double(j)));
  g.r_[n_geo] = r_switch;  // pin the junction exactly
  g.uniform_begin_ = n_geo;

  std::size_t n_uni = kProfilePoints - 1 - n_geo;  // 14336 intervals
  double h = (r_max - r_switch) / double(n_uni);
  for (std::size_t i = 1; i <= n_uni; ++i) g.r_.push_back(r_switch + double(i) * h);
  g.r_.back() = r_max;

  g.build_weights();
  return g;
}

RadialGrid RadialGrid::uniform(double r_max, std::size_t n_intervals) {
  if (n_intervals % 4 != 0) throw std::invalid_argument("uniform grid: intervals % 4 != 0");
  RadialGrid g;
  g.r_.resize(n_intervals + 1);
  double h = r_max / double(n_intervals);
  for (std::size_t j = 0; j <= n_intervals; ++j) g.r_[j] = double(j) * h;
  g.uniform_begin_ = 0;
  g.build_weights();
  return g;
}

void RadialGrid::build_weights() {
  std::size_t n = r_.size();
  w_full_.assign(n, 0.0);
  w_halved_.assign(n, 0.0);

  std::size_t ub = uniform_begin_;
  if (ub > 0) add_trapezoid(r_, 0, ub, w_full_);
  add_simpson(r_, ub, n - 1, w_full_);

  // Halved variant: every other node per section, keeping section ends.
  if (ub > 0) {
    std::vector<double> rh;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j <= ub; j += 2) {
      rh.push_back(r_[j]);
      idx.push_back(j);
    }
    if (idx.back() != ub) {
      rh.push_back(r_[ub]);
      idx.push_back(ub);
    }
    for (std::size_t k = 0; k + 1 < rh.size(); ++k) {
      double h = rh[k + 1] - rh[k];
      w_halved_[idx[k]] += 0.5 * h;
      w_halved_[idx[k + 1]] += 0.5 * h;
    }
  }
  {
    double h2 = 2.0 * (r_[ub + 1] - r_[ub]);
    std::size_t pairs = (n - 1 - ub) / 4;  // two halved intervals per Simpson panel
    for (std::size_t p = 0; p < pairs; ++p) {
      std::size_t j = ub + 4 * p;
      w_halved_[j] += h2 / 3.0;
      w_halved_[j + 2] += 4.0 * h2 / 3.0;
      w_halved_[j + 4] += h2 / 3.0;
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    double s = kFourPi * r_[j] * r_[j];
    w_full_[j] *= s;
    w_halved_[j] *= s;
  }
}

double RadialGrid::integrate(std::span<const double> f) const {
  assert(f.size() == r_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += w_full_[j] * f[j];
  return acc;
}

double RadialGrid::integrate_halved(std::span<const double> f) const {
  assert(f.size() == r_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += w_halved_[j] * f[j];
  return acc;
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
  // Fornberg, Mathematics of Computation 51 (1988).
  int n = int(nodes.size()) - 1;
  std::vector<std::vector<double>> d(std::size_t(m + 1),
                                     std::vector<double>(nodes.size(), 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  d[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[std::size_t(i)] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[std::size_t(i)] - nodes[std::size_t(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          d[std::size_t(k)][std::size_t(i)] =
              c1 * (k * d[std::size_t(k - 1)][std::size_t(i - 1)] -
                    c5 * d[std::size_t(k)][std::size_t(i - 1)]) / c2;
        d[0][std::size_t(i)] = -c1 * c5 * d[0][std::size_t(i - 1)] / c2;
      }
      for (int k = mn; k >= 1; --k)
        d[std::size_t(k)][std::size_t(j)] =
            (c4 * d[std::size_t(k)][std::size_t(j)] -
             k * d[std::size_t(k - 1)][std::size_t(j)]) / c3;
      d[0][std::size_t(j)] = c4 * d[0][std::size_t(j)] / c3;
    }
    c1 = c2;
  }
  return d[std::size_t(m)];
}

namespace {

// Canonical centered weights when the window is uniform and centered; the
// general Fornberg path covers section junctions and boundaries.
const double* canonical_weights(int m, std::size_t stencil) {
  static constexpr double d1_5[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  static constexpr double d2_7[7] = {1.0 / 90,  -3.0 / 20, 3.0 / 2, -49.0 / 18,
                                     3.0 / 2,   -3.0 / 20, 1.0 / 90};
  if (m == 1 && stencil == 5) return d1_5;
  if (m == 2 && stencil == 7) return d2_7;
  return nullptr;
}

template <class T>
std::vector<T> fd_apply(const std::vector<double>& r, std::span<const T> f, int m,
                        std::size_t stencil) {
  std::size_t n = r.size();
  std::size_t half = stencil / 2;
  std::vector<T> out(n);
  const double* canon = canonical_weights(m, stencil);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t lo = (j >= half) ? j - half : 0;
    if (lo + stencil > n) lo = n - stencil;

    if (canon && lo + half == j) {
      double h = r[lo + 1] - r[lo];
      bool uniform = true;
      for (std::size_t k = 1; k + 1 < stencil; ++k)
        if (std::fabs(r[lo + k + 1] - r[lo + k] - h) > 1e-12 * h) {
          uniform = false;
          break;
        }
      if (uniform) {
        double scale = (m == 1) ? 1.0 / h : 1.0 / (h * h);
        T acc{};
        for (std::size_t k = 0; k < stencil; ++k) acc += (canon[k] * scale) * f[lo + k];
        out[j] = acc;
        continue;
      }
    }
    auto w = fd_weights(r[j], std::span<const double>(r).subspan(lo, stencil), m);
    T acc{};
    for (std::size_t k = 0; k < stencil; ++k) acc += w[k] * f[lo + k];
    out[j] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> RadialGrid::derivative(std::span<const double> f) const {
  return fd_apply<double>(r_, f, 1, 5);
}

std::vector<std::complex<double>> RadialGrid::derivative(
    std::span<const std::complex<double>> f) const {
  return fd_apply<std::complex<double>>(r_, f, 1, 5);
}

std::vector<double> RadialGrid::second_derivative(std::span<const double> f) const {
  return fd_apply<double>(r_, f, 2, 7);
}

}  // namespace cq

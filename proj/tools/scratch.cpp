// Development scratch runs; not part of the shipped tool.
#include <chrono>
#include <cstdio>

#include "cq/grid.hpp"
#include "cq/shooting.hpp"

using namespace cq;

static void report(const shooting::SolitonProfile& p) {
  RadialGrid g = RadialGrid::profile(p.grid.back());
  std::vector<double> f2(p.values.size()), f4(p.values.size()), f6(p.values.size());
  for (size_t i = 0; i < p.values.size(); ++i) {
    double v = p.values[i];
    f2[i] = v * v;
    f4[i] = f2[i] * f2[i];
    f6[i] = f4[i] * f2[i];
  }
  auto dp = g.derivative(std::span<const double>(p.values));
  std::vector<double> fg(p.values.size());
  for (size_t i = 0; i < dp.size(); ++i) fg[i] = dp[i] * dp[i];
  double M = g.integrate(f2), G = g.integrate(fg), L4 = g.integrate(f4),
         L6 = g.integrate(f6);
  double beta = L6 / G;
  double E = 0.5 * G - 0.25 * L4 + L6 / 6.0;
  double V = G + L6 - 0.75 * L4;
  std::printf(
      "omega=%.6f b=%.12f c=%.6g  M=%.6f G=%.6f L4=%.6f L6=%.6f beta=%.6f E=%.6g "
      "V/scale=%.3g\n",
      p.omega, p.center_value, p.tail_constant, M, G, L4, L6, beta, E,
      V / (G + L6 + 0.75 * L4));
}

int main(int argc, char** argv) {
  double omegas[] = {0.023926, 0.025544, 0.054735, 0.10, 0.15};
  for (double w : omegas) {
    auto t0 = std::chrono::steady_clock::now();
    auto p = shooting::solve_ground_state(w);
    auto t1 = std::chrono::steady_clock::now();
    std::printf("[%6.1f ms] ", std::chrono::duration<double, std::milli>(t1 - t0).count());
    report(p);
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    auto gp = shooting::solve_cubic_ground_state();
    auto t1 = std::chrono::steady_clock::now();
    std::printf("[%6.1f ms] cubic: ", std::chrono::duration<double, std::milli>(t1 - t0).count());
    report(gp);
  }
  if (argc > 1) {
    double highs[] = {0.16, 0.17, 0.175, 0.18, 0.185};
    for (double w : highs) {
      auto t0 = std::chrono::steady_clock::now();
      auto p = shooting::solve_ground_state(w);
      auto t1 = std::chrono::steady_clock::now();
      std::printf("[%6.1f ms] ",
                  std::chrono::duration<double, std::milli>(t1 - t0).count());
      report(p);
    }
  }
  return 0;
}

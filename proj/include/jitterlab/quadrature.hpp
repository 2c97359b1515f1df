#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "jitterlab/errors.hpp"

namespace jitterlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
// Exact for polynomials up to degree 22, which covers every piecewise-
// polynomial integrand produced by the delay distributions within the
// hop-count limits once panels are split at the breakpoints.
inline constexpr double kKronrodNodes[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr double kGaussWeights[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

template <typename F>
void gauss_kronrod_15(F& f, double lo, double hi, double& value, double& err) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kKronrodNodes[i]);
    fv[14 - i] = f(center + half * kKronrodNodes[i]);
  }
  fv[7] = f(center);

  double kronrod = kKronrodWeights[7] * fv[7];
  for (int i = 0; i < 7; ++i) kronrod += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  double gauss = kGaussWeights[3] * fv[7];
  for (int i = 0; i < 3; ++i) gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);

  value = kronrod * half;
  err = std::fabs((kronrod - gauss) * half);
}

}  // namespace detail

// Adaptive panel integration of f over [lo, hi]. Panels start at the given
// breakpoints (interior kinks of the integrand) and the worst panel is
// bisected until the summed error estimate meets abs_tol.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi,
                                    std::vector<double> breakpoints, double abs_tol,
                                    std::size_t max_evaluations = 1u << 20) {
  QuadratureResult out;
  if (!(lo < hi)) return out;

  struct Panel {
    double lo, hi, value, err;
    bool operator<(const Panel& other) const { return err < other.err; }
  };

  breakpoints.push_back(lo);
  breakpoints.push_back(hi);
  std::sort(breakpoints.begin(), breakpoints.end());

  std::priority_queue<Panel> panels;
  double total = 0.0, total_err = 0.0;
  auto add_panel = [&](double a, double b) {
    Panel p{a, b, 0.0, 0.0};
    detail::gauss_kronrod_15(f, a, b, p.value, p.err);
    out.evaluations += 15;
    total += p.value;
    total_err += p.err;
    panels.push(p);
  };

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double a = std::max(breakpoints[i], lo);
    double b = std::min(breakpoints[i + 1], hi);
    if (a < b) add_panel(a, b);
  }

  while (total_err > abs_tol && !panels.empty()) {
    if (out.evaluations >= max_evaluations)
      throw precision_error("adaptive quadrature did not converge within its evaluation budget");
    Panel worst = panels.top();
    double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi))
      throw precision_error("adaptive quadrature stalled: panel cannot be split further");
    panels.pop();
    total -= worst.value;
    total_err -= worst.err;
    add_panel(worst.lo, mid);
    add_panel(mid, worst.hi);
  }

  out.value = total;
  out.error_estimate = total_err;
  return out;
}

}  // namespace jitterlab

// Test-only oracles, kept independent of the library evaluation paths:
// box-overlap convolution for two-hop densities, the classical Irwin-Hall
// formulas, a binomial-identity route to the terminating 2F1, composite
// Simpson integration, and random instance generators.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "jitterlab/rng.hpp"
#include "jitterlab/uniform_sum.hpp"

namespace oracles {

// density of U(a1,b1) + U(a2,b2): overlap length of the two boxes
inline double two_hop_pdf(double a1, double b1, double a2, double b2, double x) {
  const double lo = std::max(a1, x - b2);
  const double hi = std::min(b1, x - a2);
  return hi > lo ? (hi - lo) / ((b1 - a1) * (b2 - a2)) : 0.0;
}

inline long double binomial_ld(int n, int k) {
  long double result = 1.0L;
  for (int i = 1; i <= k; ++i)
    result = result * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return result;
}

// Irwin-Hall: sum of n iid U(0,1)
inline double irwin_hall_pdf(int n, double x) {
  if (x <= 0.0 || x >= static_cast<double>(n)) return 0.0;
  long double sum = 0.0L;
  long double factorial = 1.0L;
  for (int i = 2; i <= n - 1; ++i) factorial *= i;
  for (int k = 0; k <= static_cast<int>(x); ++k) {
    const long double term = binomial_ld(n, k) *
                             std::pow(static_cast<long double>(x - k), n - 1);
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum / factorial);
}

inline double irwin_hall_cdf(int n, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= static_cast<double>(n)) return 1.0;
  long double sum = 0.0L;
  long double factorial = 1.0L;
  for (int i = 2; i <= n; ++i) factorial *= i;
  for (int k = 0; k <= static_cast<int>(x); ++k) {
    const long double term =
        binomial_ld(n, k) * std::pow(static_cast<long double>(x - k), n);
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum / factorial);
}

// 2F1(m+1, 1-n; m+2; z) through the binomial identity
//   sum_i (-1)^i C(n-1, i) (m+1)/(m+1+i) z^i,
// a different algebraic route than the Pochhammer-ratio recurrence.
inline double truncated_2f1_binomial(int m, int n, double z) {
  long double sum = 0.0L;
  long double z_pow = 1.0L;
  for (int i = 0; i <= n - 1; ++i) {
    long double term = binomial_ld(n - 1, i) * static_cast<long double>(m + 1) /
                       static_cast<long double>(m + 1 + i) * z_pow;
    sum += (i % 2 == 0) ? term : -term;
    z_pow *= z;
  }
  return static_cast<double>(sum);
}

template <typename F>
double simpson(F&& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / (2.0 * panels);
  double sum = f(lo) + f(hi);
  for (int i = 1; i < 2 * panels; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline jitterlab::RouteDelayModel random_model(jitterlab::SplitMix64& rng,
                                               std::size_t max_hops, double bound = 250.0,
                                               double min_width = 1e-3) {
  const std::size_t hops = 1 + rng.uniform_index(max_hops);
  std::vector<jitterlab::UniformSpec> specs;
  for (std::size_t i = 0; i < hops; ++i) {
    double a = rng.uniform(0.0, bound);
    double b = rng.uniform(0.0, bound);
    if (a > b) std::swap(a, b);
    if (b - a < min_width) b = a + min_width;
    specs.push_back({a, b});
  }
  return jitterlab::RouteDelayModel(specs);
}

}  // namespace oracles

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jitterlab/double_double.hpp"
#include "jitterlab/errors.hpp"
#include "jitterlab/quadrature.hpp"
#include "jitterlab/rng.hpp"
#include "jitterlab/uniform_sum.hpp"

namespace jitterlab {

// Two competing routes; route1 is the one the caller considers better, and
// the inversion probability is P(delay of route1 > delay of route2).
struct InversionInstance {
  RouteDelayModel route1;
  RouteDelayModel route2;
};

enum class InversionMethod { closed_form, quadrature, monte_carlo };

inline const char* method_label(InversionMethod m) {
  switch (m) {
    case InversionMethod::closed_form: return "closed_form";
    case InversionMethod::quadrature: return "quadrature";
    case InversionMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct InversionResult {
  double probability = 0.0;
  InversionMethod method = InversionMethod::closed_form;
  double error_estimate = 0.0;
  std::size_t terms = 0;  // nonzero terms / integrand evaluations / samples
};

struct ClosedFormOptions {
  std::size_t max_combined_hops = 20;  // 2^n * 2^m term blowup guard
  std::size_t max_hops_per_route = kDefaultMaxHops;
  double precision_limit = kDefaultPrecisionLimit;  // absolute, result is in [0,1]
  double clamp_tolerance = 1e-9;
};

// xi_n = 1/((n-1)! * prod l_i) over route1, xi_bar_m = 1/(m! * prod l_i)
// over route2: the density and distribution normalizers of the two routes.
inline std::pair<double, double> normalization_constants(const InversionInstance& instance) {
  const std::size_t n = instance.route1.hop_count();
  const std::size_t m = instance.route2.hop_count();
  if (n > kDefaultMaxHops || m > kDefaultMaxHops)
    throw capacity_error("route length exceeds the factorial/table capacity");
  DoubleDouble xi1 = 1.0 / (dd_factorial(static_cast<unsigned>(n - 1)) *
                            detail::length_product(instance.route1));
  DoubleDouble xi2 = 1.0 / (dd_factorial(static_cast<unsigned>(m)) *
                            detail::length_product(instance.route2));
  return {xi1.value(), xi2.value()};
}

namespace detail {

struct SegmentIntegral {
  DoubleDouble value;
  double magnitude;  // sum of |expansion terms|
};

// Exact integral of (x-shift1)^(n-1) * (x-shift2)^m over [x_lo, x_hi] by
// binomial expansion of the first factor about (x - shift2). Polynomial
// identity, so no restriction on the shifts or limits.
inline SegmentIntegral segment_integral_dd(unsigned n, unsigned m, double shift1,
                                           double shift2, double x_lo, double x_hi) {
  SegmentIntegral out{DoubleDouble(0.0), 0.0};
  if (!(x_lo < x_hi)) return out;

  // Pascal row C(n-1, i)
  std::array<double, kDefaultMaxHops + 1> binom{};
  binom[0] = 1.0;
  for (unsigned i = 1; i < n; ++i)
    for (unsigned k = i; k > 0; --k) binom[k] += binom[k - 1];

  const DoubleDouble gap = DoubleDouble(shift2) - shift1;
  const DoubleDouble t_hi = DoubleDouble(x_hi) - shift2;
  const DoubleDouble t_lo = DoubleDouble(x_lo) - shift2;

  // gap^k for k = 0..n-1; gap_pows[0] = 1 covers the 0^0 case exactly
  std::array<DoubleDouble, kDefaultMaxHops + 1> gap_pows;
  gap_pows[0] = DoubleDouble(1.0);
  for (unsigned k = 1; k < n; ++k) gap_pows[k] = gap_pows[k - 1] * gap;

  DoubleDouble hi_pow = dd_pow(t_hi, m + 1);
  DoubleDouble lo_pow = dd_pow(t_lo, m + 1);

  for (unsigned i = 0; i < n; ++i) {
    // gap^(n-1-i) * (t_hi^(m+1+i) - t_lo^(m+1+i)) * C(n-1,i) / (m+1+i)
    const double scale = binom[i] / static_cast<double>(m + 1 + i);
    DoubleDouble upper = gap_pows[n - 1 - i] * hi_pow * scale;
    DoubleDouble lower = gap_pows[n - 1 - i] * lo_pow * scale;
    out.value += upper - lower;
    out.magnitude += std::fabs(upper.value()) + std::fabs(lower.value());
    if (i + 1 < n) {
      hi_pow *= t_hi;
      lo_pow *= t_lo;
    }
  }
  return out;
}

struct ClosedFormParts {
  double double_sum = 0.0;  // normalized Eq-style double sum
  double tail = 0.0;        // 1 - H_n(B_m-bar) when B_n exceeds B_m-bar
  double error_estimate = 0.0;
  std::size_t terms = 0;
};

inline ClosedFormParts closed_form_parts(const InversionInstance& instance,
                                         const ClosedFormOptions& opts) {
  const std::size_t n = instance.route1.hop_count();
  const std::size_t m = instance.route2.hop_count();
  if (n + m > opts.max_combined_hops)
    throw capacity_error("combined hop count " + std::to_string(n + m) +
                         " exceeds limit " + std::to_string(opts.max_combined_hops));

  const SubsetSumTable table1(instance.route1.lengths(), opts.max_hops_per_route);
  const SubsetSumTable table2(instance.route2.lengths(), opts.max_hops_per_route);

  const double sum_lo1 = instance.route1.sum_lower();
  const double sum_lo2 = instance.route2.sum_lower();
  const double sum_hi1 = instance.route1.sum_upper();
  const double sum_hi2 = instance.route2.sum_upper();
  const double hi_bound = std::min(sum_hi1, sum_hi2);

  const DoubleDouble denom = dd_factorial(static_cast<unsigned>(n - 1)) *
                             dd_factorial(static_cast<unsigned>(m)) *
                             length_product(instance.route1) *
                             length_product(instance.route2);

  DoubleDouble acc(0.0);
  double magnitude = 0.0;
  ClosedFormParts parts;

  for (const SubsetSumTable::Group& g1 : table1.groups()) {
    const double shift1 = sum_lo1 + g1.sum;
    if (shift1 >= hi_bound) break;  // groups ascend; later terms are empty
    if (g1.weight == 0) continue;
    for (const SubsetSumTable::Group& g2 : table2.groups()) {
      const double shift2 = sum_lo2 + g2.sum;
      if (shift2 >= hi_bound) break;
      if (g2.weight == 0) continue;
      const double weight = static_cast<double>(g1.weight * g2.weight);
      SegmentIntegral seg = segment_integral_dd(
          static_cast<unsigned>(n), static_cast<unsigned>(m), shift1, shift2,
          std::max(shift1, shift2), hi_bound);
      acc += seg.value * weight;
      magnitude += seg.magnitude * std::fabs(weight);
      ++parts.terms;
    }
  }

  DoubleDouble normalized = acc / denom;
  parts.double_sum = normalized.value();
  parts.error_estimate = magnitude * kDoubleDoubleEps / std::fabs(denom.value());

  if (sum_hi1 > sum_hi2) {
    SignedPowerSum cdf_sum = signed_power_sum(table1, sum_hi2 - sum_lo1,
                                              static_cast<unsigned>(n));
    DoubleDouble cdf_denom = dd_factorial(static_cast<unsigned>(n)) *
                             length_product(instance.route1);
    parts.tail = (1.0 - cdf_sum.value / cdf_denom).value();
    parts.error_estimate +=
        cdf_sum.magnitude * kDoubleDoubleEps / std::fabs(cdf_denom.value());
  }
  return parts;
}

}  // namespace detail

// Exact polynomial integral of (x-shift1)^(n-1) * (x-shift2)^m over
// [x_lo, x_hi]; 0 when the interval is empty. This is the production
// evaluation path behind the closed form; the printed hypergeometric
// antiderivative is kept as an independent cross-check.
inline double segment_integral(int n, int m, double shift1, double shift2, double x_lo,
                               double x_hi) {
  if (n < 1 || m < 0) throw std::invalid_argument("segment_integral needs n >= 1, m >= 0");
  return detail::segment_integral_dd(static_cast<unsigned>(n), static_cast<unsigned>(m),
                                     shift1, shift2, x_lo, x_hi)
      .value.value();
}

struct ClosedFormBreakdown {
  double double_sum = 0.0;
  double tail = 0.0;
};

inline ClosedFormBreakdown inversion_closed_form_breakdown(
    const InversionInstance& instance, const ClosedFormOptions& opts = {}) {
  detail::ClosedFormParts parts = detail::closed_form_parts(instance, opts);
  return {parts.double_sum, parts.tail};
}

// P(route1 delay > route2 delay) in closed form: the signed double sum of
// exact segment integrals over both subset-sum tables plus the tail mass of
// route1 beyond route2's support.
inline InversionResult inversion_probability_closed_form(
    const InversionInstance& instance, const ClosedFormOptions& opts = {}) {
  detail::ClosedFormParts parts = detail::closed_form_parts(instance, opts);
  double p = parts.double_sum + parts.tail;

  if (parts.error_estimate > opts.precision_limit)
    throw precision_error("closed-form inversion probability: estimated error " +
                          std::to_string(parts.error_estimate) +
                          " exceeds the precision budget");
  if (p < -opts.clamp_tolerance || p > 1.0 + opts.clamp_tolerance)
    throw precision_error("closed-form inversion probability " + std::to_string(p) +
                          " is outside [0,1] beyond the clamp tolerance");

  InversionResult result;
  result.probability = std::clamp(p, 0.0, 1.0);
  result.method = InversionMethod::closed_form;
  result.error_estimate = parts.error_estimate;
  result.terms = parts.terms;
  return result;
}

// Independent oracle: adaptive quadrature of pdf_route1(x) * cdf_route2(x)
// with the subset-sum breakpoints of both routes forced as panel edges.
inline InversionResult inversion_probability_quadrature(const InversionInstance& instance,
                                                        double abs_tol) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");

  const SubsetSumTable table1(instance.route1.lengths());
  const SubsetSumTable table2(instance.route2.lengths());

  const double lo = std::max(instance.route1.sum_lower(), instance.route2.sum_lower());
  const double hi = instance.route1.sum_upper();

  InversionResult result;
  result.method = InversionMethod::quadrature;
  if (!(lo < hi)) return result;  // route1's support lies entirely below route2's

  std::vector<double> breakpoints;
  for (const auto& g : table1.groups()) {
    double b = instance.route1.sum_lower() + g.sum;
    if (b > lo && b < hi) breakpoints.push_back(b);
  }
  for (const auto& g : table2.groups()) {
    double b = instance.route2.sum_lower() + g.sum;
    if (b > lo && b < hi) breakpoints.push_back(b);
  }

  auto integrand = [&](double x) {
    return pdf(instance.route1, table1, x) * cdf(instance.route2, table2, x);
  };
  QuadratureResult q = integrate_adaptive(integrand, lo, hi, std::move(breakpoints), abs_tol);

  result.probability = std::clamp(q.value, 0.0, 1.0);
  result.error_estimate = q.error_estimate;
  result.terms = q.evaluations;
  return result;
}

// Monte Carlo oracle over a counter-based stream: sample i is a pure
// function of (seed, i), so the estimate is reproducible regardless of
// evaluation order or thread count.
inline InversionResult inversion_probability_montecarlo(const InversionInstance& instance,
                                                        std::size_t samples,
                                                        std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("monte carlo needs at least one sample");

  const auto& hops1 = instance.route1.hops();
  const auto& hops2 = instance.route2.hops();
  const std::uint64_t dims = hops1.size() + hops2.size();

  std::size_t inversions = 0;
  for (std::size_t trial = 0; trial < samples; ++trial) {
    const std::uint64_t base = static_cast<std::uint64_t>(trial) * dims;
    std::uint64_t dim = 0;
    double sum1 = 0.0, sum2 = 0.0;
    for (const UniformSpec& h : hops1)
      sum1 += h.lower + h.width() * counter_uniform(seed, base + dim++);
    for (const UniformSpec& h : hops2)
      sum2 += h.lower + h.width() * counter_uniform(seed, base + dim++);
    if (sum1 > sum2) ++inversions;
  }

  InversionResult result;
  result.method = InversionMethod::monte_carlo;
  result.probability = static_cast<double>(inversions) / static_cast<double>(samples);
  result.error_estimate = std::sqrt(result.probability * (1.0 - result.probability) /
                                    static_cast<double>(samples));
  result.terms = samples;
  return result;
}

}  // namespace jitterlab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jitterlab/double_double.hpp"
#include "jitterlab/errors.hpp"

namespace jitterlab {

inline constexpr std::size_t kDefaultMaxHops = 16;

// Largest estimated relative error tolerated before an evaluation is
// rejected with precision_error instead of returned.
inline constexpr double kDefaultPrecisionLimit = 1e-9;

// One per-hop jitter interval: delay uniform on (lower, upper), in ms.
struct UniformSpec {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
};

inline void validate_uniform_spec(const UniformSpec& spec) {
  if (!(std::isfinite(spec.lower) && std::isfinite(spec.upper)))
    throw std::invalid_argument("uniform interval bounds must be finite");
  if (spec.lower < 0.0)
    throw std::invalid_argument("uniform interval bounds must be non-negative");
  if (!(spec.upper > spec.lower))
    throw std::invalid_argument("degenerate uniform interval: upper must exceed lower");
}

// Ordered per-hop intervals of one route; the route delay is the sum of
// one independent uniform draw per hop.
class RouteDelayModel {
 public:
  explicit RouteDelayModel(std::vector<UniformSpec> hops) : hops_(std::move(hops)) {
    if (hops_.empty()) throw std::invalid_argument("route needs at least one hop");
    for (const UniformSpec& h : hops_) {
      validate_uniform_spec(h);
      sum_lower_ += h.lower;
      sum_upper_ += h.upper;
    }
  }

  const std::vector<UniformSpec>& hops() const { return hops_; }
  std::size_t hop_count() const { return hops_.size(); }
  double sum_lower() const { return sum_lower_; }  // A_n
  double sum_upper() const { return sum_upper_; }  // B_n

  std::vector<double> lengths() const {
    std::vector<double> out;
    out.reserve(hops_.size());
    for (const UniformSpec& h : hops_) out.push_back(h.width());
    return out;
  }

 private:
  std::vector<UniformSpec> hops_;
  double sum_lower_ = 0.0;
  double sum_upper_ = 0.0;
};

// All 2^n subset sums of the hop interval lengths, sorted ascending, each
// with the subset size ("parity") that fixes the sign of its term. Equal
// sums stay as distinct entries; the formulas index subsets, not values.
class SubsetSumTable {
 public:
  struct Entry {
    double sum;
    std::uint32_t parity;
  };

  // Exactly-equal sums merged into one signed weight; terms with the same
  // shift are the same function of x, so folding them is exact and removes
  // the corresponding cancellation.
  struct Group {
    double sum;
    std::int64_t weight;  // sum of (-1)^parity over the folded entries
  };

  SubsetSumTable(const std::vector<double>& lengths, std::size_t max_hops = kDefaultMaxHops) {
    const std::size_t n = lengths.size();
    if (n == 0) throw std::invalid_argument("subset sums need at least one length");
    if (n > max_hops)
      throw capacity_error("hop count " + std::to_string(n) + " exceeds limit " +
                           std::to_string(max_hops) + " (table size 2^n)");
    for (double len : lengths) {
      if (!(len > 0.0) || !std::isfinite(len))
        throw std::invalid_argument("hop interval lengths must be positive");
    }

    entries_.reserve(std::size_t{1} << n);
    entries_.push_back({0.0, 0});
    for (double len : lengths) {
      const std::size_t count = entries_.size();
      for (std::size_t j = 0; j < count; ++j)
        entries_.push_back({entries_[j].sum + len, entries_[j].parity + 1});
    }
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const Entry& a, const Entry& b) { return a.sum < b.sum; });

    for (const Entry& e : entries_) {
      const double sign = (e.parity & 1u) ? -1.0 : 1.0;
      if (!groups_.empty() && groups_.back().sum == e.sum)
        groups_.back().weight += static_cast<std::int64_t>(sign);
      else
        groups_.push_back({e.sum, static_cast<std::int64_t>(sign)});
    }
  }

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<Group>& groups() const { return groups_; }
  double total_length() const { return entries_.back().sum; }

 private:
  std::vector<Entry> entries_;
  std::vector<Group> groups_;
};

inline SubsetSumTable subset_sums(const std::vector<double>& lengths,
                                  std::size_t max_hops = kDefaultMaxHops) {
  return SubsetSumTable(lengths, max_hops);
}

// Largest 1-based index j with x - A_n - s_j > 0 (strict); 0 if none.
inline std::size_t rank(double x, const RouteDelayModel& model, const SubsetSumTable& table) {
  const double offset = x - model.sum_lower();
  const auto& entries = table.entries();
  std::size_t lo = 0, hi = entries.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (offset - entries[mid].sum > 0.0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

namespace detail {

struct SignedPowerSum {
  DoubleDouble value;
  double magnitude;  // sum of |terms|, for the conditioning estimate
};

// sum over groups with s < offset of weight * (offset - s)^exponent
inline SignedPowerSum signed_power_sum(const SubsetSumTable& table, double offset,
                                       unsigned exponent) {
  SignedPowerSum out{DoubleDouble(0.0), 0.0};
  for (const SubsetSumTable::Group& g : table.groups()) {
    if (!(offset - g.sum > 0.0)) break;  // groups are sorted ascending
    if (g.weight == 0) continue;
    DoubleDouble term = dd_pow(DoubleDouble(offset - g.sum), exponent) *
                        static_cast<double>(g.weight);
    out.value += term;
    out.magnitude += std::fabs(term.value());
  }
  return out;
}

inline DoubleDouble length_product(const RouteDelayModel& model) {
  DoubleDouble prod(1.0);
  for (const UniformSpec& h : model.hops()) prod *= (DoubleDouble(h.upper) - h.lower);
  return prod;
}

inline void check_precision(const SignedPowerSum& sum, double precision_limit,
                            const char* what) {
  const double value = std::fabs(sum.value.value());
  const double abs_err = sum.magnitude * kDoubleDoubleEps;
  if (abs_err > precision_limit * value)
    throw precision_error(std::string(what) +
                          ": estimated relative error exceeds the precision budget");
}

}  // namespace detail

// Density h_n(x) of the route delay sum; zero outside (A_n, B_n).
inline double pdf(const RouteDelayModel& model, const SubsetSumTable& table, double x,
                  double precision_limit = kDefaultPrecisionLimit) {
  if (!(x > model.sum_lower()) || !(x < model.sum_upper())) return 0.0;
  const unsigned n = static_cast<unsigned>(model.hop_count());
  detail::SignedPowerSum sum =
      detail::signed_power_sum(table, x - model.sum_lower(), n - 1);
  detail::check_precision(sum, precision_limit, "pdf");
  DoubleDouble denom = dd_factorial(n - 1) * detail::length_product(model);
  const double density = (sum.value / denom).value();
  return density < 0.0 ? 0.0 : density;
}

inline double pdf(const RouteDelayModel& model, double x,
                  double precision_limit = kDefaultPrecisionLimit) {
  return pdf(model, SubsetSumTable(model.lengths()), x, precision_limit);
}

// Distribution function H_n(x); clamped to [0, 1].
inline double cdf(const RouteDelayModel& model, const SubsetSumTable& table, double x,
                  double precision_limit = kDefaultPrecisionLimit) {
  if (!(x > model.sum_lower())) return 0.0;
  if (x >= model.sum_upper()) return 1.0;
  const unsigned n = static_cast<unsigned>(model.hop_count());
  detail::SignedPowerSum sum =
      detail::signed_power_sum(table, x - model.sum_lower(), n);
  detail::check_precision(sum, precision_limit, "cdf");
  DoubleDouble denom = dd_factorial(n) * detail::length_product(model);
  const double p = (sum.value / denom).value();
  return std::clamp(p, 0.0, 1.0);
}

inline double cdf(const RouteDelayModel& model, double x,
                  double precision_limit = kDefaultPrecisionLimit) {
  return cdf(model, SubsetSumTable(model.lengths()), x, precision_limit);
}

}  // namespace jitterlab

#pragma once

#include <stdexcept>

#include "jitterlab/double_double.hpp"

namespace jitterlab {

namespace detail {

// 2F1(m+1, 1-n; m+2; z). The second numerator parameter is a non-positive
// integer, so the series terminates after n terms (a polynomial of degree
// n-1 in z).
inline DoubleDouble truncated_2f1_dd(int m_param, int n_param, DoubleDouble z) {
  DoubleDouble sum(1.0);
  DoubleDouble term(1.0);
  for (int k = 0; k < n_param - 1; ++k) {
    // term_{k+1} = term_k * (a+k)(b+k) / ((c+k)(k+1)) * z
    const double a_k = static_cast<double>(m_param + 1 + k);
    const double b_k = static_cast<double>(1 - n_param + k);
    const double c_k = static_cast<double>(m_param + 2 + k);
    term = term * (a_k * b_k) / (c_k * static_cast<double>(k + 1)) * z;
    sum += term;
  }
  return sum;
}

// Antiderivative of (x - shift1)^(n-1) * (x - shift2)^m written with the
// terminating hypergeometric series. Requires shift1 != shift2. Used as an
// independent algebraic route to cross-check the exact polynomial integral.
inline DoubleDouble hypergeometric_antiderivative_dd(int n, int m, double shift1,
                                                     double shift2, double x) {
  DoubleDouble z = (DoubleDouble(x) - shift2) / (DoubleDouble(shift1) - shift2);
  DoubleDouble f = truncated_2f1_dd(m, n, z);
  DoubleDouble lead = dd_pow(DoubleDouble(shift2) - shift1, static_cast<unsigned>(n - 1));
  DoubleDouble tail = dd_pow(DoubleDouble(x) - shift2, static_cast<unsigned>(m + 1));
  return f * lead * tail / static_cast<double>(m + 1);
}

}  // namespace detail

inline double truncated_2f1(int m_param, int n_param, double z) {
  if (m_param < 1 || n_param < 1)
    throw std::invalid_argument("truncated_2f1 needs positive integer parameters");
  return detail::truncated_2f1_dd(m_param, n_param, DoubleDouble(z)).value();
}

inline double hypergeometric_antiderivative(int n, int m, double shift1, double shift2,
                                            double x) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("hypergeometric antiderivative needs n >= 1 and m >= 1");
  if (shift1 == shift2)
    throw std::invalid_argument("hypergeometric antiderivative is singular at shift1 == shift2");
  return detail::hypergeometric_antiderivative_dd(n, m, shift1, shift2, x).value();
}

}  // namespace jitterlab

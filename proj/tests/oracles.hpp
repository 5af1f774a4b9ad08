#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's spectral code.

#include "hjsr/numat.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

// Largest root modulus of the characteristic polynomial, via closed forms for
// n <= 2 and Durand-Kerner iteration in long double for n = 3.
inline double spectral_radius(const hjsr::NonNegMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 1) return a(0, 0);
  if (n == 2) {
    const long double tr = (long double)a(0, 0) + a(1, 1);
    const long double det = (long double)a(0, 0) * a(1, 1) - (long double)a(0, 1) * a(1, 0);
    const long double disc = std::max(0.0L, tr * tr - 4 * det);
    return static_cast<double>((tr + std::sqrt(disc)) / 2);
  }
  if (n != 3) throw std::invalid_argument("oracle: only n <= 3");
  using C = std::complex<long double>;
  auto m = [&](int i, int j) { return (long double)a(i, j); };
  // det(lambda I - A) = lambda^3 - c2 lambda^2 + c1 lambda - c0
  const long double c2 = m(0, 0) + m(1, 1) + m(2, 2);
  const long double c1 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                         m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const long double c0 = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  auto p = [&](C z) { return ((z - c2) * z + c1) * z - c0; };
  const long double radius = 1 + std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  C r[3] = {C(0.4L, 0.9L) * radius, std::pow(C(0.4L, 0.9L), 2) * radius, std::pow(C(0.4L, 0.9L), 3) * radius};
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < 3; ++i) {
      C den = 1;
      for (int j = 0; j < 3; ++j)
        if (j != i) den *= (r[i] - r[j]);
      if (std::abs(den) == 0) den = C(1e-30L, 0);
      r[i] -= p(r[i]) / den;
    }
  }
  // Polish each root with Newton steps.
  long double best = 0;
  for (C z : r) {
    for (int it = 0; it < 20; ++it) {
      C d = (3.0L * z - 2.0L * c2) * z + c1;
      if (std::abs(d) == 0) break;
      z -= p(z) / d;
    }
    best = std::max(best, std::abs(z));
  }
  return static_cast<double>(best);
}

// Plain triple-loop product, independent of the library's mat_product.
inline std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < n; ++k) s += (long double)a[i * n + k] * b[k * n + j];
      c[i * n + j] = static_cast<double>(s);
    }
  return c;
}

}  // namespace oracle

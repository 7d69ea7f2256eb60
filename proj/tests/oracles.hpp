// Copyright 2026 The tdscatter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference computations used only by tests.  Nothing here
// calls the library's special functions or quadrature engine.

#ifndef TDSCATTER_TESTS_ORACLES_HPP
#define TDSCATTER_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "tdscatter/special_functions.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

template <class F>
auto gl30(const F& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

/// Composite 30-point Gauss-Legendre with n equal panels.
template <class F>
auto gl_composite(const F& f, double a, double b, int n) {
  const double h = (b - a) / n;
  decltype(f(a)) sum{};
  for (int i = 0; i < n; ++i) sum += gl30(f, a + i * h, a + (i + 1) * h);
  return sum;
}

/// Repeated averaging of alternating partial sums (Euler transform).
inline cplx averaged_limit(std::vector<cplx> s, int levels) {
  for (int l = 0; l < levels && s.size() > 1; ++l) {
    std::vector<cplx> t(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) t[i] = 0.5 * (s[i] + s[i + 1]);
    s.swap(t);
  }
  return s.back();
}

/// J0(x) = (1/2pi) \int_0^{2pi} cos(x sin t) dt by the periodic trapezoid rule.
inline double j0_angular(double x, int n = 64) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::cos(x * std::sin(2.0 * kPi * k / n));
  return sum / n;
}

/// K0(x) = \int_1^inf e^{-tx}/sqrt(t^2-1) dt with t = cosh u.
inline double k0_cosh(double x) {
  double u_max = 1.0;
  while (x * std::cosh(u_max) < 760.0) u_max += 0.5;
  return gl_composite([&](double u) { return std::exp(-x * std::cosh(u)); }, 0.0, u_max, 64);
}

/// K1(x) = \int_0^inf e^{-x cosh u} cosh u du.
inline double k1_cosh(double x) {
  double u_max = 1.0;
  while (x * std::cosh(u_max) < 760.0) u_max += 0.5;
  return gl_composite([&](double u) { return std::exp(-x * std::cosh(u)) * std::cosh(u); }, 0.0,
                      u_max, 64);
}

/**
 * \int_0^inf g(t) dt for g ~ (smooth, slowly decaying) x cos or sin with
 * period 2 pi / rate: half-period panels, each split finely near the
 * origin, summed and accelerated by repeated averaging.
 */
template <class G>
cplx oscillatory_half_line(const G& g, double rate, double start = 0.0, int panels = 400,
                           int levels = 30) {
  const double half = kPi / rate;
  std::vector<cplx> partial;
  cplx running = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = start + k * half;
    const double b = a + half;
    const double sub = std::min(half / 8.0, std::max(0.25, 0.25 * a));
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / sub)));
    running += gl_composite([&](double t) { return cplx(g(t)); }, a, b, n);
    partial.push_back(running);
  }
  return averaged_limit(partial, levels);
}

/// K0(x) = \int_0^inf cos(x t)/sqrt(1+t^2) dt.  The result is e^{-x}
/// small while the half-period contributions are O(1/x), so the sum is
/// carried in binary128 (quadmath) to keep the cancellation exact enough.
double k0_cosine(double x);

/// K0(-i x) = i e^{ix} \int_0^inf 2 e^{-x s^2}/sqrt(2i - s^2) ds
/// (the t-integral rotated onto t = 1 + i s^2), trapezoid on the even extension.
inline cplx k0_minus_i(double x) {
  const double h = 0.01;
  const double s_max = std::sqrt(760.0 / x);
  cplx sum = 0.5 * 2.0 / std::sqrt(cplx(0.0, 2.0));
  for (double s = h; s < s_max; s += h)
    sum += 2.0 * std::exp(-x * s * s) / std::sqrt(cplx(-s * s, 2.0));
  return cplx(0.0, 1.0) * std::polar(1.0, x) * sum * h;
}

/// Y0(1) from the principal-value identity
///   PV \int_0^inf q J0(q) / (q^2 - 1) dq = -(pi/2) Y0(1),
/// with J0 taken from the angular oracle.
inline double y0_at_one_sokhotsky() {
  auto h = [](double q) { return q * j0_angular(q, 96) / (q + 1.0); };
  const double h1 = h(1.0);
  const double core = gl_composite([&](double q) { return (h(q) - h1) / (q - 1.0); }, 0.0, 2.0, 16);
  const cplx tail = oscillatory_half_line(
      [&](double q) { return q * j0_angular(q, 96 + static_cast<int>(q)) / (q * q - 1.0); }, 1.0,
      2.0, 300, 40);
  return -2.0 / kPi * (core + tail.real());
}

/// \int dx/(2pi) e^{i kappa x} f(x) by quadrature over the profile support,
/// split at the top-hat's taper breakpoints.
inline cplx fourier1d_quadrature(const tds::Profile1D& p, double kappa) {
  std::vector<double> cuts;
  const double c = p.center, l = p.width;
  if (p.kind == tds::ProfileKind::gaussian)
    cuts = {c - 12 * l, c + 12 * l};
  else
    cuts = {c - l, c - 0.5 * l, c + 0.5 * l, c + l};
  cplx sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double width = std::min(0.25 * l, std::abs(kappa) > 0 ? kPi / (4 * std::abs(kappa)) : l);
    const int n = std::max(4, static_cast<int>(std::ceil((b - a) / width)));
    sum += gl_composite([&](double x) { return std::polar(p(x), kappa * x); }, a, b, n);
  }
  return sum / (2.0 * kPi);
}

}  // namespace oracle

#endif  // TDSCATTER_TESTS_ORACLES_HPP

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

#ifndef TDSCATTER_TESTS_HELMHOLTZ_FD_HPP
#define TDSCATTER_TESTS_HELMHOLTZ_FD_HPP

#include <algorithm>
#include <vector>

#include "tdscatter/greens.hpp"

namespace testing {

/**
 * max_ac |{(d_s d_s + w^2) delta_ab - d_a d_b} G_bc| relative to the largest
 * of the three terms (lap G, w^2 G, grad div G), with second-order central
 * differences of step h.  Near the source lap G dominates w^2 G by
 * 1/(w r)^2, so the scale is taken from the terms themselves.
 */
inline double helmholtz_residual(double omega, const tds::Vec3& r, double h) {
  using tds::Complex;
  using tds::Tensor3C;
  using tds::Vec3;
  auto G = [&](const Vec3& x) { return tds::greens_tensor(omega, x); };
  auto second = [&](int a, int b) -> Tensor3C {
    const Vec3 ea = Vec3::Unit(a) * h, eb = Vec3::Unit(b) * h;
    if (a == b) return (G(r + ea) - 2.0 * G(r) + G(r - ea)) / (h * h);
    return (G(r + ea + eb) - G(r + ea - eb) - G(r - ea + eb) + G(r - ea - eb)) / (4.0 * h * h);
  };
  Tensor3C d2[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) d2[a][b] = (b < a) ? d2[b][a] : second(a, b);
  const Tensor3C g0 = G(r);
  const Tensor3C lap = d2[0][0] + d2[1][1] + d2[2][2];
  Tensor3C grad_div;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      grad_div(a, c) = 0.0;
      for (int b = 0; b < 3; ++b) grad_div(a, c) += d2[a][b](b, c);
    }
  const Tensor3C res = lap + omega * omega * g0 - grad_div;
  const double scale = std::max({lap.cwiseAbs().maxCoeff(), omega * omega * g0.cwiseAbs().maxCoeff(),
                                 grad_div.cwiseAbs().maxCoeff()});
  return res.cwiseAbs().maxCoeff() / scale;
}

/// Ordinary least-squares slope.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing

#endif  // TDSCATTER_TESTS_HELMHOLTZ_FD_HPP

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

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"

namespace oracle {

namespace {

using f128 = __float128;

struct Rule128 {
  std::vector<f128> x, w;
};

// Gauss-Legendre on [-1, 1] by Newton iteration in binary128.
Rule128 legendre128(int n) {
  Rule128 r;
  r.x.resize(n);
  r.w.resize(n);
  const f128 pi = M_PIq;
  for (int i = 0; i < n; ++i) {
    f128 x = cosq(pi * (i + static_cast<f128>(0.75)) / (n + static_cast<f128>(0.5)));
    f128 dp = 0;
    for (int it = 0; it < 60; ++it) {
      f128 p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const f128 p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const f128 dx = p1 / dp;
      x -= dx;
      if (fabsq(dx) < static_cast<f128>(1e-32)) break;
    }
    r.x[i] = x;
    r.w[i] = 2 / ((1 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

double k0_cosine(double xd) {
  static const Rule128 rule = legendre128(30);
  const f128 x = xd;
  const f128 half = M_PIq / x;
  auto panel = [&](f128 a, f128 b) {
    const f128 c = (a + b) / 2, h = (b - a) / 2;
    f128 s = 0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const f128 t = c + h * rule.x[i];
      s += rule.w[i] * cosq(x * t) / sqrtq(1 + t * t);
    }
    return s * h;
  };
  std::vector<f128> partial;
  f128 running = 0;
  for (int k = 0; k < 400; ++k) {
    const f128 a = k * half, b = a + half;
    const double ad = static_cast<double>(a);
    const double sub = std::min(static_cast<double>(half) / 8.0, std::max(0.25, 0.25 * ad));
    const int n = std::max(1, static_cast<int>(std::ceil(static_cast<double>(b - a) / sub)));
    const f128 step = (b - a) / n;
    for (int j = 0; j < n; ++j) running += panel(a + j * step, a + (j + 1) * step);
    partial.push_back(running);
  }
  for (int l = 0; l < 40 && partial.size() > 1; ++l) {
    for (std::size_t i = 0; i + 1 < partial.size(); ++i) partial[i] = (partial[i] + partial[i + 1]) / 2;
    partial.pop_back();
  }
  return static_cast<double>(partial.back());
}

}  // namespace oracle

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

#include "tdscatter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "tdscatter/special_functions.hpp"

namespace tds {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::far_field: return "far_field";
    case Regime::evanescent: return "evanescent";
    case Regime::propagating: return "propagating";
    case Regime::singular: return "singular";
  }
  return "unknown";
}

ResolutionReport rayleigh_report_modulated(double w_mod, double omega, double k) {
  ResolutionReport r;
  r.classical_cutoff = k;
  for (int i = 0; i < 2; ++i) {
    const int s = i == 0 ? 1 : -1;
    Probe& p = r.probes[i];
    p.s = s;
    p.argument = std::abs(omega - s * k) / w_mod;
    p.enhancement = p.argument / k;
    p.regime = Regime::far_field;
  }
  return r;
}

ResolutionReport rayleigh_report_rod(const MovingRod& m, double omega, const Vec3& k) {
  const double kn = k.norm();
  ResolutionReport r;
  r.classical_cutoff = kn;
  for (int i = 0; i < 2; ++i) {
    const int s = i == 0 ? 1 : -1;
    Probe& p = r.probes[i];
    p.s = s;
    p.argument = std::abs(omega - s * kn) * m.inv_gamma_v();
    p.enhancement = p.argument / kn;
    const double b = (omega - s * kn) / m.v + s * k.x();
    switch (cylinder_kernel(1.0, b, omega).branch) {
      case KernelBranch::evanescent: p.regime = Regime::evanescent; break;
      case KernelBranch::propagating: p.regime = Regime::propagating; break;
      case KernelBranch::singular: p.regime = Regime::singular; break;
    }
  }
  return r;
}

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& samples) {
  const std::size_t n = samples.size();
  if (n < 8) throw std::invalid_argument("fit_power_law: need at least 8 samples");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [rho, val] = samples[i];
    if (!(rho > 0.0) || !(val > 0.0) || !std::isfinite(rho) || !std::isfinite(val))
      throw std::invalid_argument("fit_power_law: samples must be positive and finite");
    x[i] = std::log(rho);
    y[i] = std::log(val);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_law: abscissae must differ");
  ScalingFit f;
  f.samples = n;
  f.exponent = sxy / sxx;
  const double intercept = my - f.exponent * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (intercept + f.exponent * x[i]);
    sse += e * e;
  }
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double dof = static_cast<double>(n - 2);
  const boost::math::students_t t(dof);
  f.ci_halfwidth = boost::math::quantile(boost::math::complement(t, 0.025)) * std::sqrt(sse / dof / sxx);
  f.rho_min = std::exp(*std::min_element(x.begin(), x.end()));
  f.rho_max = std::exp(*std::max_element(x.begin(), x.end()));
  return f;
}

ScalingFit fit_power_law_window(const std::vector<std::pair<double, double>>& samples, double max_change) {
  const std::size_t n = samples.size();
  if (n < 8) throw std::invalid_argument("fit_power_law_window: need at least 8 samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(samples[i].first > 0.0) || !(samples[i].second > 0.0))
      throw std::invalid_argument("fit_power_law_window: samples must be positive");
    if (i > 0 && !(samples[i].first > samples[i - 1].first))
      throw std::invalid_argument("fit_power_law_window: samples must be sorted by rho");
  }
  // Local slopes between neighbours, located at the log-midpoint.
  std::vector<double> slope(n - 1), mid(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double lx0 = std::log2(samples[i].first), lx1 = std::log2(samples[i + 1].first);
    slope[i] = (std::log(samples[i + 1].second) - std::log(samples[i].second)) /
               (std::log(samples[i + 1].first) - std::log(samples[i].first));
    mid[i] = 0.5 * (lx0 + lx1);
  }
  // A sample boundary i (between slopes i-1 and i) is smooth if the slope
  // change per octave stays under max_change.
  std::size_t best_lo = 0, best_len = 0;
  std::size_t lo = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    bool smooth = false;
    if (i < n - 1) smooth = std::abs(slope[i] - slope[i - 1]) / (mid[i] - mid[i - 1]) < max_change;
    if (!smooth) {
      // Window of samples lo .. i (inclusive), capped at n - 1.
      const std::size_t hi = std::min(i, n - 1);
      const std::size_t len = hi - lo + 1;
      if (len >= best_len) {
        best_len = len;
        best_lo = lo;
      }
      lo = i;
    }
  }
  if (best_len < 8) throw std::invalid_argument("fit_power_law_window: no smooth window of 8 samples");
  return fit_power_law({samples.begin() + best_lo, samples.begin() + best_lo + best_len});
}

DopplerSpectrum doppler_scan(const MovingRod& m, double omega0, const std::vector<double>& grid) {
  m.validate();
  if (grid.size() < 3) throw std::invalid_argument("doppler_scan: grid needs at least 3 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("doppler_scan: grid must be increasing");
  auto power = [&](double w) { return std::norm(doppler_scattered_spectrum(m, w, omega0)); };
  DopplerSpectrum out;
  out.omega = grid;
  out.power.resize(grid.size());
  std::size_t ipk = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.power[i] = power(grid[i]);
    if (out.power[i] > out.power[ipk]) ipk = i;
  }
  out.peak_omega = grid[ipk];
  out.peak_power = out.power[ipk];
  const double half = 0.5 * out.peak_power;
  auto crossing = [&](double a, double b) {
    // power(a) >= half > power(b) or the reverse; bisection to full precision.
    const bool a_above = power(a) >= half;
    for (int it = 0; it < 200 && a != b; ++it) {
      const double c = 0.5 * (a + b);
      if (c == a || c == b) break;
      if ((power(c) >= half) == a_above) a = c;
      else b = c;
    }
    return 0.5 * (a + b);
  };
  double left = NAN, right = NAN;
  for (std::size_t i = ipk; i > 0; --i)
    if (out.power[i - 1] < half) {
      left = crossing(grid[i], grid[i - 1]);
      break;
    }
  for (std::size_t i = ipk; i + 1 < grid.size(); ++i)
    if (out.power[i + 1] < half) {
      right = crossing(grid[i], grid[i + 1]);
      break;
    }
  out.fwhm = (std::isnan(left) || std::isnan(right)) ? NAN : right - left;
  return out;
}

}  // namespace tds

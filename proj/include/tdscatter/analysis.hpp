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

#ifndef TDSCATTER_ANALYSIS_HPP
#define TDSCATTER_ANALYSIS_HPP

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "tdscatter/dielectric.hpp"
#include "tdscatter/types.hpp"

namespace tds {

enum class Regime { far_field, evanescent, propagating, singular };

std::string_view to_string(Regime r);

/// One spectral probe of the one-photon signal.
struct Probe {
  int s = 1;
  double argument = 0.0;
  /// argument / k
  double enhancement = 0.0;
  Regime regime = Regime::far_field;
};

/**
 * Which spectral components of eta or eps_bar the one-photon signal
 * samples, compared with the classical cutoff k.  probes[0] is s = +1,
 * probes[1] is s = -1.
 */
struct ResolutionReport {
  double classical_cutoff = 0.0;
  std::array<Probe, 2> probes;

  const Probe& plus() const { return probes[0]; }
  const Probe& minus() const { return probes[1]; }
};

/// Modulated dielectric: arguments |w - s k| / w_mod, both tagged far_field.
ResolutionReport rayleigh_report_modulated(double w_mod, double omega, double k);

/**
 * Moving rod: arguments |w - s k| / (gamma |v|), each tagged by the branch
 * of cylinder_kernel at b_s = (w - s k)/v + s k1.  s = -1 is always
 * evanescent for |v| < 1.
 */
ResolutionReport rayleigh_report_rod(const MovingRod& m, double omega, const Vec3& k);

/// Log-log least-squares power law.
struct ScalingFit {
  double exponent = 0.0;
  /// 95% Student-t half-width of the exponent.
  double ci_halfwidth = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// std::invalid_argument for fewer than 8 samples, nonpositive values or
/// repeated abscissae.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& samples);

/**
 * Fits the longest contiguous window (at least 8 samples) in which the
 * local log-log slope changes by less than max_change per octave; ties go
 * to the window at larger rho.  Samples must be sorted by rho.
 * std::invalid_argument when no such window exists.
 */
ScalingFit fit_power_law_window(const std::vector<std::pair<double, double>>& samples,
                                double max_change = 0.1);

/// |eps_hat[(w - w0)/v]|^2 on a frequency grid with its peak and width.
struct DopplerSpectrum {
  std::vector<double> omega;
  std::vector<double> power;
  double peak_omega = 0.0;
  double peak_power = 0.0;
  /// Full width at half maximum, half-power points refined by bisection.
  double fwhm = 0.0;
};

/// std::invalid_argument for a grid with fewer than 3 points or unsorted.
DopplerSpectrum doppler_scan(const MovingRod& m, double omega0, const std::vector<double>& grid);

}  // namespace tds

#endif  // TDSCATTER_ANALYSIS_HPP

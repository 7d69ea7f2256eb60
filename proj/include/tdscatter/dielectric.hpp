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

#ifndef TDSCATTER_DIELECTRIC_HPP
#define TDSCATTER_DIELECTRIC_HPP

#include "tdscatter/special_functions.hpp"
#include "tdscatter/types.hpp"

namespace tds {

/**
 * Resting dielectric with a travelling modulation:
 *
 *   eps_bar(r, t) = chi(r) [1 + eta(x - w t)]
 *   eps_bar[W, r] = chi(r) ( delta(W) + eta[-W/w] e^{i W x / w} / w )
 *
 * The delta(W) static term is never sampled numerically.  Detection
 * pipelines keep the detector frequency away from the incident one, which
 * removes it from every observable; modulated_static_coefficient() exposes
 * its weight for completeness.
 */
struct ModulatedDielectric {
  Profile3D chi;
  Profile1D eta;
  /// Modulation speed in units of c; any w > 0 is allowed.
  double w = 0.5;

  void validate() const;
};

/// Weight of delta(W) in eps_bar[W, r]: chi(r).
double modulated_static_coefficient(const ModulatedDielectric& d, const Vec3& r);

/// Guard band below which |W| counts as the static line.
inline constexpr double kStaticGuard = 1e-12;

/// chi(r) eta[-W/w] e^{i W x/w} / w for |W| > guard; std::domain_error otherwise.
Complex modulated_spectrum(const ModulatedDielectric& d, double freq, const Vec3& r,
                           double static_guard = kStaticGuard);

/**
 * Dielectric translating along +x with velocity v (|v| < 1; the sign is
 * the direction of motion).  In the lab frame
 *   eps_bar(gamma (x - v t), y, z),   gamma = (1 - v^2)^{-1/2}.
 * Only the thin-rod limit eps_bar(x) delta(rho) is modelled.  A pointlike
 * rod has a flat spectrum eps_bar[kappa] = point_strength / (2 pi),
 * i.e. eps_bar(x) = point_strength delta(x).
 */
struct MovingRod {
  Profile1D profile;
  double v = 0.5;
  bool pointlike = false;
  double point_strength = 1.0;

  void validate() const;
  double gamma() const;
  /// 1/(gamma |v|) = sqrt(v^-2 - 1).
  double inv_gamma_v() const;
  /// Rest-frame spectrum eps_bar[kappa] (fourier1d convention).
  Complex rest_spectrum(double kappa) const;
  /// Upper bound on |rest_spectrum|, non-increasing in |kappa|.
  double rest_envelope(double kappa) const;
};

MovingRod make_rod(const Profile1D& profile, double v);
MovingRod make_point_rod(double v, double strength = 1.0);

/// Spectral factor of the thin rod at lab frequency W:
///   eps_bar[-W/(gamma v)] / (gamma |v|).
/// The e^{i W x / v} phase and the delta(rho) factor are handled by the
/// cylindrical kernels downstream.
Complex rod_spectrum(const MovingRod& m, double freq);

/// Non-relativistic Doppler factor eps_hat[(W - W0)/v] of a rod moving with
/// |v| << 1 and lit at W0, using eps(x) = \int dk e^{ikx} eps_hat[k]
/// (eps_hat[k] = fourier1d(profile, -k)).
Complex doppler_scattered_spectrum(const MovingRod& m, double freq, double incident_freq);

}  // namespace tds

#endif  // TDSCATTER_DIELECTRIC_HPP

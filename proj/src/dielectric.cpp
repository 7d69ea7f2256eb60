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

#include "tdscatter/dielectric.hpp"

#include <cmath>
#include <stdexcept>

namespace tds {

void ModulatedDielectric::validate() const {
  chi.validate();
  eta.validate();
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("modulation speed w must be > 0");
}

double modulated_static_coefficient(const ModulatedDielectric& d, const Vec3& r) { return d.chi(r); }

Complex modulated_spectrum(const ModulatedDielectric& d, double freq, const Vec3& r, double static_guard) {
  if (std::abs(freq) <= static_guard)
    throw std::domain_error("modulated_spectrum: frequency inside the static-term guard band");
  return d.chi(r) / d.w * fourier1d(d.eta, -freq / d.w) * std::polar(1.0, freq * r.x() / d.w);
}

void MovingRod::validate() const {
  if (!pointlike) profile.validate();
  if (!std::isfinite(v) || v == 0.0 || !(std::abs(v) < 1.0))
    throw std::invalid_argument("rod velocity must satisfy 0 < |v| < 1");
  if (pointlike && !std::isfinite(point_strength))
    throw std::invalid_argument("point_strength must be finite");
}

double MovingRod::gamma() const { return 1.0 / std::sqrt((1.0 - v) * (1.0 + v)); }

double MovingRod::inv_gamma_v() const { return std::sqrt((1.0 - v) * (1.0 + v)) / std::abs(v); }

Complex MovingRod::rest_spectrum(double kappa) const {
  if (pointlike) return point_strength / two_pi;
  return fourier1d(profile, kappa);
}

double MovingRod::rest_envelope(double kappa) const {
  if (pointlike) return std::abs(point_strength) / two_pi;
  return spectral_envelope(profile, kappa);
}

MovingRod make_rod(const Profile1D& profile, double v) {
  MovingRod m{profile, v, false, 1.0};
  m.validate();
  return m;
}

MovingRod make_point_rod(double v, double strength) {
  MovingRod m{gaussian_profile(0.0, 1.0), v, true, strength};
  m.validate();
  return m;
}

Complex rod_spectrum(const MovingRod& m, double freq) {
  const double s = m.inv_gamma_v();
  const double kappa = -freq * s * (m.v > 0.0 ? 1.0 : -1.0);
  return s * m.rest_spectrum(kappa);
}

Complex doppler_scattered_spectrum(const MovingRod& m, double freq, double incident_freq) {
  return m.rest_spectrum(-(freq - incident_freq) / m.v);
}

}  // namespace tds

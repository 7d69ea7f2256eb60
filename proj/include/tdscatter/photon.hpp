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

#ifndef TDSCATTER_PHOTON_HPP
#define TDSCATTER_PHOTON_HPP

#include <cstddef>
#include <utility>

#include "tdscatter/dielectric.hpp"
#include "tdscatter/greens.hpp"
#include "tdscatter/special_functions.hpp"
#include "tdscatter/types.hpp"
#include "tdscatter/vacuum.hpp"

namespace tds {

/// Real transverse basis e_1(q), e_2(q) with e_1 x e_2 = q/|q|.
struct PolarizationBasis {
  Vec3 e1;
  Vec3 e2;

  const Vec3& operator[](int lambda) const { return lambda == 0 ? e1 : e2; }
};

/**
 * Gram-Schmidt from the coordinate axis least aligned with q (smallest
 * |q_i|, lowest index on ties); e2 = q^ x e1.  std::domain_error for q = 0.
 */
PolarizationBasis polarization_basis(const Vec3& q);

/// p = c_1 e_1(q) + c_2 e_2(q)
Eigen::Vector3cd polarization_vector(const Pol2C& c, const Vec3& q);

/**
 * Narrow-band one-photon state C_l(q) = c_l C(q), C concentrated at k.
 * envelope_norm is the overlap factor that multiplies the squared
 * amplitudes: |\int d^3q sqrt(q) C(q) / (2 pi)|^2 for the modulated
 * dielectric, |\int d^3q C(q)|^2 for the rod (whose amplitudes already
 * carry q^{3/2}).
 */
struct IncidentPhoton {
  Vec3 k = Vec3::UnitX();
  Pol2C c = Pol2C(1.0, 0.0);
  double envelope_norm = 1.0;

  /// std::invalid_argument unless |k| > 0, | |c| - 1 | <= 1e-12, envelope_norm >= 0.
  void validate() const;
  Eigen::Vector3cd polarization() const { return polarization_vector(c, k); }
};

/**
 * Coherent state with amplitude A in a narrow-band envelope
 * f_a(q) = c_a f(q) around k, normalized so |c|^2 |\int f|^2 = 1.
 */
struct CoherentState {
  Complex amplitude = 0.0;
  Vec3 k = Vec3::UnitX();
  Pol2C c = Pol2C(1.0, 0.0);

  void validate() const;
};

/// Gaussian photon envelope C(q) = N exp(-|q - center|^2 / (4 width^2)),
/// normalized to \int |C|^2 d^3q = 1.
struct GaussianEnvelope {
  Vec3 center = Vec3::UnitX();
  double width = 0.1;

  double operator()(const Vec3& q) const;
};

inline constexpr double kGuardBand = 1e-6;

/// std::invalid_argument if ||k| - omega| <= guard * max(omega, |k|).
void check_guard_band(double omega, double k, double guard = kGuardBand);

// ---------------------------------------------------------------------------
// Modulated dielectric.

/// V tensor with its quadrature error.
struct VResult {
  Tensor3C value = Tensor3C::Zero();
  double error_estimate = 0.0;
  std::size_t evals = 0;
};

/**
 * V_ab[r, q, dw] = \int d^3r' G_ab[w, r - r'] eps_bar[dw, r'] e^{i q.r'} for
 * dw != 0, where only the modulation term of eps_bar[dw, r'] survives:
 *   eps_bar[dw, r'] -> chi(r') eta[-dw/w_mod] e^{i dw x'/w_mod} / w_mod.
 * Product Gauss-Legendre over the support of chi, two orders compared for
 * the error estimate.  std::runtime_error if that estimate exceeds
 * rel_tol |V|.
 */
VResult scattering_amplitude_V(const ModulatedDielectric& d, const Vec3& r, const Vec3& q, double dw,
                               double omega, GreenForm form, double rel_tol = 1e-6);

/// Closed form of the above with the far-field Green tensor:
///   g (delta - nn) (e^{iwr}/r) (2pi)^3 chi[w n - q - x dw/w_mod] eta[-dw/w_mod] / w_mod.
Tensor3C scattering_amplitude_V_far(const ModulatedDielectric& d, const Vec3& r, const Vec3& q,
                                    double dw, double omega, bool normalized_green = true);

/// Closed-form one-photon term for s = +1 or -1:
///   g^2 (2pi)^6 sigma / (w_mod^2 r^2) |eta[(w - s k)/w_mod] chi[s k - w n + x (w - s k)/w_mod]|^2,
///   sigma = (p.p* - |p.n|^2) envelope_norm.
double photon_modulated_term(const ModulatedDielectric& d, const Detector& det,
                             const IncidentPhoton& photon, int s, bool normalized_green = true,
                             double guard = kGuardBand);

/// vacuum_modulated plus both one-photon terms (parts.photon_plus / photon_minus).
IntensityResult photon_modulated(const ModulatedDielectric& d, const Detector& det,
                                 const IncidentPhoton& photon, const QuadratureSpec& spec,
                                 bool normalized_green = true, double guard = kGuardBand);

/// Brute-force |xi(s)|^2 for an explicit Gaussian envelope, with the
/// matching envelope_norm from the same quadrature.
struct XiResult {
  double plus = 0.0;
  double minus = 0.0;
  double envelope_norm = 0.0;
};

/**
 * xi_a(s) = \int d^3q sqrt(q)/(2pi) C(q) c_l V_ab[r, s q, w - s q] e_bl(q)
 * with the far-field V, by a product Gauss-Legendre rule over
 * center +- 10 width (`nodes` per axis).  The static delta term of V is
 * left out, as in the closed form.
 */
XiResult photon_modulated_bruteforce(const ModulatedDielectric& d, const Detector& det,
                                     const Pol2C& c, const GaussianEnvelope& env,
                                     bool normalized_green = true, int nodes = 48,
                                     double guard = kGuardBand);

// ---------------------------------------------------------------------------
// Moving rod.

/// Detector position y = (axial, rho, 0).
Vec3 rod_detector_position(const Detector& det);

/**
 * nu(y, p, W) = e^{i y1 b} eps_bar[W/(gamma v)] cylinder_kernel(rho, b, w) / (gamma v),
 * b = W/v + p1.  The kernel takes the K0 branch for b^2 > w^2 and the
 * H0^(1) branch for b^2 < w^2.
 */
struct NuValue {
  Complex value;
  CylinderKernel kernel;
};
NuValue rod_nu(const MovingRod& m, const Detector& det, const Vec3& p, double big_omega);

/// b_s = (w - s k)/v + s k1 for the one-photon terms.
double rod_photon_b(double omega, double v, const Vec3& k, int s);

/// eps_bar[(w - k)/(gamma v)] and eps_bar[(w + k)/(gamma v)], the spectral
/// factors of the s = +1 and s = -1 terms.
std::pair<Complex, Complex> rod_photon_spectra(const MovingRod& m, double omega, double k);

/// (1 - v m1)(v m2 chi^1_a(m) + (1 - v m1) chi^2_a(m)) for a = 1, 2.
Pol2C theta_kinematic_factor(double v, const Vec3& q);

/**
 * Theta^(+-)_a(q) = -(i gamma^2 / 4 pi^2) nu(y, +-q, w -+ q) q^{3/2}
 *                   (1 - v m1)(v m2 chi^1_a(m) + (1 - v m1) chi^2_a(m)),
 * m = q/|q|, chi^i_a the i-th component of e_a(q).
 */
struct ThetaAmplitudes {
  Pol2C plus;
  Pol2C minus;
  CylinderKernel kernel_plus;
  CylinderKernel kernel_minus;
};
ThetaAmplitudes theta_amplitudes(const MovingRod& m, const Vec3& q, double omega, const Detector& det);

/// vacuum_rod_covariant plus envelope_norm |c.Theta^(s)(k)|^2 for s = +-.
/// std::domain_error when a kernel sits on b_s^2 = w^2.
IntensityResult photon_rod(const MovingRod& m, const Detector& det, const IncidentPhoton& photon,
                           const QuadratureSpec& spec,
                           CovariantKinematics k = CovariantKinematics::direct);

// ---------------------------------------------------------------------------
// Coherent state.

/**
 * vac + |A|^2 (|a+|^2 + |a-|^2) - 2 Re[A^2 <a+, a->] for narrow-band
 * amplitudes a+, a-.  parts.photon_plus/minus hold the |A|^2 terms and
 * parts.cross the interference term.  With A = 0 the result is the
 * vacuum intensity exactly.
 */
IntensityResult coherent_rod(const MovingRod& m, const Detector& det, const CoherentState& cs,
                             const QuadratureSpec& spec,
                             CovariantKinematics k = CovariantKinematics::direct);

/// Modulated form with amplitudes a(s) = sqrt(k)/(2pi) V[r, s k, w - s k] p.
IntensityResult coherent_modulated(const ModulatedDielectric& d, const Detector& det,
                                   const CoherentState& cs, const QuadratureSpec& spec,
                                   bool normalized_green = true, double guard = kGuardBand);

// ---------------------------------------------------------------------------
// Polarization filtering.

/**
 * Returns the photon with c replaced by (e2_y, -e1_y)/norm in the basis of
 * q0, so that c_a chi^2_a(q0) = 0.  std::domain_error when q0 lies in the
 * xy or xz plane or along y, where no such c keeps the Theta coupling
 * nonzero.
 */
IncidentPhoton polarization_filter(const IncidentPhoton& photon, const Vec3& q0);

/**
 * Incident-only correlator <A^[in]2 dagger A^[in]2> for the narrow-band
 * photon: |c_a chi^2_a(k)|^2 overlap / (16 pi^3), where overlap stands for
 * |\int d^3q C(q) e^{i q.y} delta(w - q) / sqrt(q)|^2.
 */
double incident_correlator(const IncidentPhoton& photon, double overlap = 1.0);

}  // namespace tds

#endif  // TDSCATTER_PHOTON_HPP

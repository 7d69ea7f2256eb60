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

#ifndef TDSCATTER_SPECIAL_FUNCTIONS_HPP
#define TDSCATTER_SPECIAL_FUNCTIONS_HPP

#include <array>
#include <string_view>

#include "tdscatter/types.hpp"

namespace tds {

/**
 * Fourier conventions.
 *
 * Public interfaces use one convention for every transform:
 *
 *   time      f[w]     = \int dt/(2 pi)    e^{+i w t}   f(t)
 *   1D space  f[kappa] = \int dx/(2 pi)    e^{+i kappa x} f(x)   (fourier1d)
 *   3D space  chi[q]   = \int d^3r/(2 pi)^3 e^{-i q.r}  chi(r)   (fourier3d)
 *
 * Relativistic thin-rod formulas are usually written with the space
 * transform  f_hat[kappa] = \int dx/(2 pi) e^{-i kappa x} f(x),  whose
 * synthesis carries no 2 pi.  Conversion table:
 *
 *   f_hat[kappa]           = fourier1d(f, -kappa)
 *   chi[q]                 = prod_i fourier1d(chi_i, -q_i)
 *   |f_hat[kappa]|         = |fourier1d(f, kappa)|          (real profiles)
 *
 * Only moduli of rod spectra enter observables, so the sign of the rod
 * spectral argument never changes a result.
 */

enum class ProfileKind { gaussian, smoothed_tophat };

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/**
 * Real localized 1D profile.
 *
 * gaussian:         a * exp(-(x-c)^2 / (2 l^2))
 * smoothed_tophat:  a on |x-c| <= l/2, raised-cosine taper to zero on
 *                   l/2 < |x-c| < l.  Equivalently a rectangle of half-width
 *                   3l/4 convolved with a unit-area cosine lobe of width l/2,
 *                   which gives the closed-form transform.
 */
struct Profile1D {
  ProfileKind kind = ProfileKind::gaussian;
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;

  /// Throws std::invalid_argument unless width > 0 and all fields finite.
  void validate() const;
  double operator()(double x) const;
  /// Half-width of the interval outside which the profile is negligible
  /// (exactly zero for the top-hat, below 1e-17 relative for the Gaussian).
  double support_halfwidth() const;
  /// \int f(x) dx
  double integral() const;
};

inline Profile1D gaussian_profile(double amplitude, double width, double center = 0.0) {
  return {ProfileKind::gaussian, amplitude, center, width};
}
inline Profile1D tophat_profile(double amplitude, double width, double center = 0.0) {
  return {ProfileKind::smoothed_tophat, amplitude, center, width};
}

/// Separable 3D profile chi(r) = f_x(x) f_y(y) f_z(z).
struct Profile3D {
  std::array<Profile1D, 3> factors{};

  void validate() const;
  double operator()(const Vec3& r) const;
  /// Componentwise support half-widths.
  Vec3 support_halfwidths() const;
};

/// f[kappa] = \int dx/(2 pi) e^{i kappa x} f(x), closed form.
Complex fourier1d(const Profile1D& profile, double kappa);

/// chi[q] = \int d^3r/(2 pi)^3 e^{-i q.r} chi(r), closed form.
Complex fourier3d(const Profile3D& chi, const Vec3& q);

/// Upper bound on |fourier1d(profile, kappa)|, monotone non-increasing in |kappa|.
double spectral_envelope(const Profile1D& profile, double kappa);

/// Smallest |kappa| beyond which spectral_envelope stays below
/// rel * spectral_envelope(profile, 0).
double spectral_cutoff(const Profile1D& profile, double rel);

/// J0(x); even in x.
double bessel_j0(double x);
/// Y0(x), x > 0.
double bessel_y0(double x);
/// K0(x), x > 0; std::domain_error otherwise.
double bessel_k0(double x);
/// K1(x), x > 0; std::domain_error otherwise.
double bessel_k1(double x);
/// H0^(1)(x) = J0(x) + i Y0(x), x > 0.  This is the outgoing (retarded,
/// +i0) branch: K0(-i x) = (i pi / 2) H0^(1)(x).
Complex hankel1_0(double x);

enum class KernelBranch { evanescent, propagating, singular };

std::string_view to_string(KernelBranch branch);

/// Default threshold for |b^2 - w^2| relative to max(b^2, w^2).
inline constexpr double kSingularRelThreshold = 1e-12;

struct CylinderKernel {
  Complex value;
  KernelBranch branch;
  /// rho * sqrt(|b^2 - w^2|): the Bessel argument actually used.
  double argument;
  bool singular() const { return branch == KernelBranch::singular; }
};

/**
 * \int dx e^{i w sqrt(x^2+rho^2) + i b x} / (-4 pi sqrt(x^2+rho^2)):
 *
 *   b^2 > w^2:  -K0(rho sqrt(b^2-w^2)) / (2 pi)
 *   b^2 < w^2:  H0^(1)(rho sqrt(w^2-b^2)) / (4 i)
 *
 * Within the singular threshold the small-argument logarithm of the
 * evanescent form is returned (infinite at exact equality) and the sample
 * is flagged; integrators are expected to exclude it.
 */
CylinderKernel cylinder_kernel(double rho, double b, double omega,
                               double singular_rel = kSingularRelThreshold);

}  // namespace tds

#endif  // TDSCATTER_SPECIAL_FUNCTIONS_HPP

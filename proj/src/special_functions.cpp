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

#include "tdscatter/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tds {

namespace {

double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// Top-hat geometry: rectangle half-width and cosine-lobe width.
double tophat_rect_halfwidth(double width) { return 0.75 * width; }
double tophat_lobe_width(double width) { return 0.5 * width; }

// \int e^{i kappa x} h(x) dx for the unit-area cosine lobe of width d:
// cos(u) / (1 - (2u/pi)^2) with u = kappa d / 2, written so that the
// removable point 2|u| = pi is evaluated through sinc.
double cosine_lobe_transform(double kappa, double d) {
  const double u = std::abs(0.5 * kappa * d);
  const double t = 0.5 * pi - u;
  return 0.5 * pi * sinc(t) / (1.0 + 2.0 * u / pi);
}

}  // namespace

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::smoothed_tophat: return "smoothed_tophat";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(std::string_view name) {
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "smoothed_tophat") return ProfileKind::smoothed_tophat;
  throw std::invalid_argument("unknown profile kind '" + std::string(name) + "'");
}

void Profile1D::validate() const {
  if (!std::isfinite(amplitude) || !std::isfinite(center) || !std::isfinite(width))
    throw std::invalid_argument("profile fields must be finite");
  if (!(width > 0.0)) throw std::invalid_argument("profile width must be > 0");
}

double Profile1D::operator()(double x) const {
  const double s = x - center;
  switch (kind) {
    case ProfileKind::gaussian:
      return amplitude * std::exp(-0.5 * s * s / (width * width));
    case ProfileKind::smoothed_tophat: {
      const double as = std::abs(s);
      if (as <= 0.5 * width) return amplitude;
      if (as >= width) return 0.0;
      const double phase = pi * (as - 0.5 * width) / (0.5 * width);
      return amplitude * 0.5 * (1.0 + std::cos(phase));
    }
  }
  return 0.0;
}

double Profile1D::support_halfwidth() const {
  // exp(-s^2/2) < 1e-17 for s > 8.9
  return kind == ProfileKind::gaussian ? 9.0 * width : width;
}

double Profile1D::integral() const {
  switch (kind) {
    case ProfileKind::gaussian: return amplitude * width * std::sqrt(two_pi);
    case ProfileKind::smoothed_tophat: return amplitude * 2.0 * tophat_rect_halfwidth(width);
  }
  return 0.0;
}

void Profile3D::validate() const {
  for (const auto& f : factors) f.validate();
}

double Profile3D::operator()(const Vec3& r) const {
  return factors[0](r.x()) * factors[1](r.y()) * factors[2](r.z());
}

Vec3 Profile3D::support_halfwidths() const {
  return {factors[0].support_halfwidth(), factors[1].support_halfwidth(),
          factors[2].support_halfwidth()};
}

Complex fourier1d(const Profile1D& p, double kappa) {
  const Complex shift = std::polar(1.0, kappa * p.center);
  switch (p.kind) {
    case ProfileKind::gaussian: {
      const double kl = kappa * p.width;
      return p.amplitude * p.width / std::sqrt(two_pi) * std::exp(-0.5 * kl * kl) * shift;
    }
    case ProfileKind::smoothed_tophat: {
      const double a = tophat_rect_halfwidth(p.width);
      const double rect = a / pi * sinc(kappa * a);
      return p.amplitude * rect * cosine_lobe_transform(kappa, tophat_lobe_width(p.width)) * shift;
    }
  }
  return 0.0;
}

Complex fourier3d(const Profile3D& chi, const Vec3& q) {
  return fourier1d(chi.factors[0], -q.x()) * fourier1d(chi.factors[1], -q.y()) *
         fourier1d(chi.factors[2], -q.z());
}

double spectral_envelope(const Profile1D& p, double kappa) {
  const double k = std::abs(kappa);
  switch (p.kind) {
    case ProfileKind::gaussian:
      return std::abs(fourier1d(p, k));
    case ProfileKind::smoothed_tophat: {
      const double a = tophat_rect_halfwidth(p.width);
      const double rect = k * a <= 1.0 ? 1.0 : 1.0 / (k * a);
      const double u = 0.5 * k * tophat_lobe_width(p.width);
      const double lobe = u <= pi ? 1.0 : 1.0 / (4.0 * u * u / (pi * pi) - 1.0);
      return std::abs(p.amplitude) * a / pi * rect * lobe;
    }
  }
  return 0.0;
}

double spectral_cutoff(const Profile1D& p, double rel) {
  if (!(rel > 0.0 && rel < 1.0)) throw std::invalid_argument("spectral_cutoff: rel must be in (0,1)");
  if (p.kind == ProfileKind::gaussian) return std::sqrt(2.0 * std::log(1.0 / rel)) / p.width;
  const double target = rel * spectral_envelope(p, 0.0);
  double lo = 0.0;
  double hi = 1.0 / p.width;
  while (spectral_envelope(p, hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (spectral_envelope(p, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double bessel_y0(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_y0: argument must be > 0");
  return std::cyl_neumann(0.0, x);
}

double bessel_k0(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0: argument must be > 0");
  // libstdc++ underflows to 0 well before 745; keep the result exactly 0 there.
  if (x > 700.0) return 0.0;
  return std::cyl_bessel_k(0.0, x);
}

double bessel_k1(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k1: argument must be > 0");
  if (x > 700.0) return 0.0;
  return std::cyl_bessel_k(1.0, x);
}

Complex hankel1_0(double x) {
  if (!(x > 0.0)) throw std::domain_error("hankel1_0: argument must be > 0");
  return {std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x)};
}

std::string_view to_string(KernelBranch branch) {
  switch (branch) {
    case KernelBranch::evanescent: return "evanescent";
    case KernelBranch::propagating: return "propagating";
    case KernelBranch::singular: return "singular";
  }
  return "unknown";
}

CylinderKernel cylinder_kernel(double rho, double b, double omega, double singular_rel) {
  if (!(rho > 0.0)) throw std::domain_error("cylinder_kernel: rho must be > 0");
  const double ab = std::abs(b);
  const double aw = std::abs(omega);
  const double diff = (ab - aw) * (ab + aw);
  const double scale = std::max(ab * ab, aw * aw);
  if (std::abs(diff) <= singular_rel * scale) {
    const double arg = rho * std::sqrt(std::abs(diff));
    const double log_limit = arg > 0.0 ? std::log(2.0 * std::exp(-euler_gamma) / arg)
                                       : std::numeric_limits<double>::infinity();
    return {Complex(-log_limit / two_pi, 0.0), KernelBranch::singular, arg};
  }
  if (diff > 0.0) {
    const double arg = rho * std::sqrt(diff);
    return {Complex(-bessel_k0(arg) / two_pi, 0.0), KernelBranch::evanescent, arg};
  }
  const double arg = rho * std::sqrt(-diff);
  return {hankel1_0(arg) / (4.0 * I), KernelBranch::propagating, arg};
}

}  // namespace tds

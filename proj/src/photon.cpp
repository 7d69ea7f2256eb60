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

#include "tdscatter/photon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tds {

PolarizationBasis polarization_basis(const Vec3& q) {
  const double n = q.norm();
  if (!(n > 0.0)) throw std::domain_error("polarization_basis: q must be nonzero");
  const Vec3 u = q / n;
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (std::abs(u[a]) < std::abs(u[axis])) axis = a;
  const Vec3 a = Vec3::Unit(axis);
  PolarizationBasis b;
  b.e1 = (a - a.dot(u) * u).normalized();
  b.e2 = u.cross(b.e1);
  return b;
}

Eigen::Vector3cd polarization_vector(const Pol2C& c, const Vec3& q) {
  const PolarizationBasis b = polarization_basis(q);
  return c[0] * b.e1.cast<Complex>() + c[1] * b.e2.cast<Complex>();
}

void IncidentPhoton::validate() const {
  if (!(k.norm() > 0.0) || !k.allFinite()) throw std::invalid_argument("photon k must be nonzero");
  if (!(std::abs(c.norm() - 1.0) <= 1e-12)) throw std::invalid_argument("photon polarization c must have |c| = 1");
  if (!(envelope_norm >= 0.0) || !std::isfinite(envelope_norm))
    throw std::invalid_argument("photon envelope_norm must be >= 0");
}

void CoherentState::validate() const {
  if (!(k.norm() > 0.0) || !k.allFinite()) throw std::invalid_argument("coherent k must be nonzero");
  if (!(std::abs(c.norm() - 1.0) <= 1e-12))
    throw std::invalid_argument("coherent polarization c must have |c| = 1");
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
    throw std::invalid_argument("coherent amplitude must be finite");
}

double GaussianEnvelope::operator()(const Vec3& q) const {
  const double norm = std::pow(two_pi * width * width, -0.75);
  return norm * std::exp(-(q - center).squaredNorm() / (4.0 * width * width));
}

void check_guard_band(double omega, double k, double guard) {
  if (!(std::abs(k - omega) > guard * std::max(omega, k)))
    throw std::invalid_argument("detector frequency must differ from the incident |k| (guard band)");
}

// ---------------------------------------------------------------------------

namespace {

// Integration segments of one chi factor: the smoothed top-hat has kinks
// at |s| = w/2 and w.
std::vector<double> chi_breaks(const Profile1D& p) {
  if (p.kind == ProfileKind::smoothed_tophat)
    return {p.center - p.width, p.center - 0.5 * p.width, p.center + 0.5 * p.width, p.center + p.width};
  const double h = p.support_halfwidth();
  return {p.center - h, p.center + h};
}

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
};

AxisRule axis_rule(const Profile1D& p, double k_eff, int order) {
  const GaussRule& g = gauss_legendre(order);
  const std::vector<double> br = chi_breaks(p);
  double max_len = two_pi / std::max(k_eff, 1e-300);
  if (p.kind == ProfileKind::gaussian) max_len = std::min(max_len, 2.0 * p.width);
  AxisRule r;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
    const double h = (b - a) / panels;
    for (int j = 0; j < panels; ++j) {
      const double mid = a + (j + 0.5) * h;
      for (std::size_t n = 0; n < g.nodes.size(); ++n) {
        r.x.push_back(mid + 0.5 * h * g.nodes[n]);
        r.w.push_back(0.5 * h * g.weights[n]);
      }
    }
  }
  return r;
}

double green_factor(bool normalized) { return normalized ? -1.0 / (4.0 * pi) : 1.0; }

}  // namespace

VResult scattering_amplitude_V(const ModulatedDielectric& d, const Vec3& r, const Vec3& q, double dw,
                               double omega, GreenForm form, double rel_tol) {
  d.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("scattering_amplitude_V: omega must be > 0");
  if (dw == 0.0) throw std::invalid_argument("scattering_amplitude_V: dw = 0 carries the static delta term");
  if (form == GreenForm::exact) {
    bool inside = true;
    for (int a = 0; a < 3; ++a)
      inside = inside && std::abs(r[a] - d.chi.factors[a].center) <= d.chi.factors[a].support_halfwidth();
    if (inside) throw std::invalid_argument("scattering_amplitude_V: r lies inside the support of chi");
  }
  const Complex eta = fourier1d(d.eta, -dw / d.w) / d.w;
  const Vec3 kw = q + (dw / d.w) * Vec3::UnitX();
  const double k_eff = kw.norm() + omega;

  auto run = [&](int order, std::size_t& evals) {
    AxisRule ax[3];
    for (int a = 0; a < 3; ++a) ax[a] = axis_rule(d.chi.factors[a], k_eff, order);
    // Separable factors chi_a(x_a) e^{i kw_a x_a} w_a.
    std::vector<Complex> f[3];
    for (int a = 0; a < 3; ++a) {
      f[a].resize(ax[a].x.size());
      for (std::size_t i = 0; i < ax[a].x.size(); ++i)
        f[a][i] = ax[a].w[i] * d.chi.factors[a](ax[a].x[i]) * std::polar(1.0, kw[a] * ax[a].x[i]);
    }
    Tensor3C sum = Tensor3C::Zero();
    for (std::size_t i = 0; i < f[0].size(); ++i) {
      if (f[0][i] == 0.0) continue;
      for (std::size_t j = 0; j < f[1].size(); ++j) {
        const Complex fij = f[0][i] * f[1][j];
        if (fij == 0.0) continue;
        for (std::size_t l = 0; l < f[2].size(); ++l) {
          const Complex w = fij * f[2][l];
          if (w == 0.0) continue;
          const Vec3 src(ax[0].x[i], ax[1].x[j], ax[2].x[l]);
          sum += w * greens_eval(form, omega, r, src);
          ++evals;
        }
      }
    }
    return Tensor3C(eta * sum);
  };
  VResult out;
  const Tensor3C lo = run(10, out.evals);
  out.value = run(16, out.evals);
  out.error_estimate = (out.value - lo).cwiseAbs().maxCoeff();
  const double scale = out.value.cwiseAbs().maxCoeff();
  if (out.error_estimate > rel_tol * scale && out.error_estimate > 1e-300)
    throw std::runtime_error("scattering_amplitude_V: quadrature error above tolerance");
  return out;
}

Tensor3C scattering_amplitude_V_far(const ModulatedDielectric& d, const Vec3& r, const Vec3& q,
                                    double dw, double omega, bool normalized_green) {
  const double rn = r.norm();
  const Vec3 n = r / rn;
  const Complex eta = fourier1d(d.eta, -dw / d.w) / d.w;
  const Vec3 arg = omega * n - q - (dw / d.w) * Vec3::UnitX();
  const Complex s = green_factor(normalized_green) * std::polar(1.0, omega * rn) / rn *
                    std::pow(two_pi, 3) * fourier3d(d.chi, arg) * eta;
  const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - n * n.transpose();
  return s * proj.cast<Complex>();
}

double photon_modulated_term(const ModulatedDielectric& d, const Detector& det,
                             const IncidentPhoton& photon, int s, bool normalized_green,
                             double guard) {
  if (s != 1 && s != -1) throw std::invalid_argument("photon_modulated_term: s must be +1 or -1");
  check_far_field(d, det);
  photon.validate();
  const double omega = det.omega;
  const double k = photon.k.norm();
  check_guard_band(omega, k, guard);
  const double r = det.r.norm();
  const Vec3 n = det.n();
  const Eigen::Vector3cd p = photon.polarization();
  const double geom = p.squaredNorm() - std::norm(p.dot(n.cast<Complex>()));
  const double sigma = geom * photon.envelope_norm;
  const double g = green_factor(normalized_green);
  const double dw = omega - s * k;
  const Complex eta = fourier1d(d.eta, dw / d.w);
  const Complex chi = fourier3d(d.chi, s * photon.k - omega * n + (dw / d.w) * Vec3::UnitX());
  return g * g * std::pow(two_pi, 6) * sigma / (d.w * d.w * r * r) * std::norm(eta * chi);
}

IntensityResult photon_modulated(const ModulatedDielectric& d, const Detector& det,
                                 const IncidentPhoton& photon, const QuadratureSpec& spec,
                                 bool normalized_green, double guard) {
  const double plus = photon_modulated_term(d, det, photon, 1, normalized_green, guard);
  const double minus = photon_modulated_term(d, det, photon, -1, normalized_green, guard);
  IntensityResult out = vacuum_modulated(d, det, spec, normalized_green);
  out.parts.photon_plus = plus;
  out.parts.photon_minus = minus;
  out.value = out.parts.vacuum + plus + minus;
  return out;
}

XiResult photon_modulated_bruteforce(const ModulatedDielectric& d, const Detector& det,
                                     const Pol2C& c, const GaussianEnvelope& env,
                                     bool normalized_green, int nodes, double guard) {
  check_far_field(d, det);
  if (!(env.width > 0.0)) throw std::invalid_argument("envelope width must be > 0");
  const double omega = det.omega;
  const double k = env.center.norm();
  check_guard_band(omega, k, guard);
  const GaussRule& g = gauss_legendre(nodes);
  const double h = 10.0 * env.width;
  Eigen::Vector3cd xi_p = Eigen::Vector3cd::Zero(), xi_m = Eigen::Vector3cd::Zero();
  Complex overlap = 0.0;
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j)
      for (int l = 0; l < nodes; ++l) {
        const Vec3 q = env.center + h * Vec3(g.nodes[i], g.nodes[j], g.nodes[l]);
        const double w = h * h * h * g.weights[i] * g.weights[j] * g.weights[l];
        const double qn = q.norm();
        const double a = w * std::sqrt(qn) / two_pi * env(q);
        if (a == 0.0) continue;
        const Eigen::Vector3cd p = polarization_vector(c, q);
        xi_p += a * (scattering_amplitude_V_far(d, det.r, q, omega - qn, omega, normalized_green) * p);
        xi_m += a * (scattering_amplitude_V_far(d, det.r, -q, omega + qn, omega, normalized_green) * p);
        overlap += a;
      }
  return {xi_p.squaredNorm(), xi_m.squaredNorm(), std::norm(overlap)};
}

// ---------------------------------------------------------------------------

Vec3 rod_detector_position(const Detector& det) { return Vec3(det.axial, det.rho, 0.0); }

namespace {

double signed_inv_gamma_v(const MovingRod& m) { return m.v > 0 ? m.inv_gamma_v() : -m.inv_gamma_v(); }

void require_rod_detector(const Detector& det) {
  det.validate();
  if (det.kind != Detector::Kind::cylindrical)
    throw std::invalid_argument("moving rod needs a cylindrical detector");
}

}  // namespace

NuValue rod_nu(const MovingRod& m, const Detector& det, const Vec3& p, double big_omega) {
  const double s = signed_inv_gamma_v(m);
  const double b = big_omega / m.v + p.x();
  NuValue out{0.0, cylinder_kernel(det.rho, b, det.omega)};
  out.value = std::polar(1.0, det.axial * b) * m.rest_spectrum(big_omega * s) * out.kernel.value * s;
  return out;
}

double rod_photon_b(double omega, double v, const Vec3& k, int s) {
  return (omega - s * k.norm()) / v + s * k.x();
}

std::pair<Complex, Complex> rod_photon_spectra(const MovingRod& m, double omega, double k) {
  const double s = signed_inv_gamma_v(m);
  return {m.rest_spectrum((omega - k) * s), m.rest_spectrum((omega + k) * s)};
}

Pol2C theta_kinematic_factor(double v, const Vec3& q) {
  const Vec3 u = q.normalized();
  const PolarizationBasis basis = polarization_basis(q);
  const double a = 1.0 - v * u.x();
  Pol2C kin;
  for (int l = 0; l < 2; ++l) kin[l] = a * (v * u.y() * basis[l].x() + a * basis[l].y());
  return kin;
}

ThetaAmplitudes theta_amplitudes(const MovingRod& m, const Vec3& q, double omega, const Detector& det) {
  m.validate();
  require_rod_detector(det);
  if (!(omega > 0.0)) throw std::invalid_argument("theta_amplitudes: omega must be > 0");
  const double qn = q.norm();
  if (!(qn > 0.0)) throw std::domain_error("theta_amplitudes: q must be nonzero");
  const Pol2C kin = theta_kinematic_factor(m.v, q);
  const double g = m.gamma();
  const Complex pref = -I * g * g / (4.0 * pi * pi) * std::pow(qn, 1.5);
  Detector at = det;
  at.omega = omega;
  const NuValue nu_p = rod_nu(m, at, q, omega - qn);
  const NuValue nu_m = rod_nu(m, at, -q, omega + qn);
  return {pref * nu_p.value * kin, pref * nu_m.value * kin, nu_p.kernel, nu_m.kernel};
}

IntensityResult photon_rod(const MovingRod& m, const Detector& det, const IncidentPhoton& photon,
                           const QuadratureSpec& spec, CovariantKinematics k) {
  photon.validate();
  const ThetaAmplitudes th = theta_amplitudes(m, photon.k, det.omega, det);
  if (th.kernel_plus.singular() || th.kernel_minus.singular())
    throw std::domain_error("photon_rod: kernel on the b_s^2 = omega^2 singular set");
  IntensityResult out = vacuum_rod_covariant(m, det, spec, k);
  out.parts.photon_plus = photon.envelope_norm * std::norm(photon.c.conjugate().dot(th.plus));
  out.parts.photon_minus = photon.envelope_norm * std::norm(photon.c.conjugate().dot(th.minus));
  out.value = out.parts.vacuum + out.parts.photon_plus + out.parts.photon_minus;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class V>
void add_coherent(IntensityResult& out, Complex amp, const V& ap, const V& am) {
  const double a2 = std::norm(amp);
  out.parts.photon_plus = a2 * ap.squaredNorm();
  out.parts.photon_minus = a2 * am.squaredNorm();
  // <a+, a-> = sum_alpha a+_alpha conj(a-_alpha)
  const Complex inner = am.dot(ap);
  out.parts.cross = -2.0 * (amp * amp * inner).real();
  out.value = out.parts.vacuum + out.parts.photon_plus + out.parts.photon_minus + out.parts.cross;
}

}  // namespace

IntensityResult coherent_rod(const MovingRod& m, const Detector& det, const CoherentState& cs,
                             const QuadratureSpec& spec, CovariantKinematics k) {
  cs.validate();
  const ThetaAmplitudes th = theta_amplitudes(m, cs.k, det.omega, det);
  if (th.kernel_plus.singular() || th.kernel_minus.singular())
    throw std::domain_error("coherent_rod: kernel on the b_s^2 = omega^2 singular set");
  IntensityResult out = vacuum_rod_covariant(m, det, spec, k);
  Eigen::Matrix<Complex, 1, 1> ap, am;
  ap(0) = cs.c.conjugate().dot(th.plus);
  am(0) = cs.c.conjugate().dot(th.minus);
  add_coherent(out, cs.amplitude, ap, am);
  return out;
}

IntensityResult coherent_modulated(const ModulatedDielectric& d, const Detector& det,
                                   const CoherentState& cs, const QuadratureSpec& spec,
                                   bool normalized_green, double guard) {
  cs.validate();
  check_far_field(d, det);
  const double omega = det.omega;
  const double k = cs.k.norm();
  check_guard_band(omega, k, guard);
  const Eigen::Vector3cd p = polarization_vector(cs.c, cs.k);
  const double amp = std::sqrt(k) / two_pi;
  const Eigen::Vector3cd ap =
      amp * (scattering_amplitude_V_far(d, det.r, cs.k, omega - k, omega, normalized_green) * p);
  const Eigen::Vector3cd am =
      amp * (scattering_amplitude_V_far(d, det.r, -cs.k, omega + k, omega, normalized_green) * p);
  IntensityResult out = vacuum_modulated(d, det, spec, normalized_green);
  add_coherent(out, cs.amplitude, ap, am);
  return out;
}

// ---------------------------------------------------------------------------

IncidentPhoton polarization_filter(const IncidentPhoton& photon, const Vec3& q0) {
  photon.validate();
  const double qn = q0.norm();
  if (!(qn > 0.0)) throw std::domain_error("polarization_filter: q0 must be nonzero");
  if (!(photon.k.cross(q0).norm() <= 1e-12 * qn * photon.k.norm()) || !(photon.k.dot(q0) > 0.0))
    throw std::invalid_argument("polarization_filter: q0 must point along the photon momentum");
  const Vec3 u = q0 / qn;
  const PolarizationBasis b = polarization_basis(q0);
  const double n = std::hypot(b.e1.y(), b.e2.y());
  // The filtered p is along y x m, so its Theta coupling is v m2 p1 ~ v m_y m_z.
  if (n < 1e-12 || std::abs(u.y()) < 1e-12 || std::abs(u.z()) < 1e-12)
    throw std::domain_error("polarization_filter: degenerate geometry, no coupling survives the filter");
  IncidentPhoton out = photon;
  out.c = Pol2C(b.e2.y() / n, -b.e1.y() / n);
  return out;
}

double incident_correlator(const IncidentPhoton& photon, double overlap) {
  photon.validate();
  const PolarizationBasis b = polarization_basis(photon.k);
  const Complex cy = photon.c[0] * b.e1.y() + photon.c[1] * b.e2.y();
  return std::norm(cy) * overlap / (16.0 * pi * pi * pi);
}

}  // namespace tds

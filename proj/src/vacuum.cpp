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

#include "tdscatter/vacuum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdscatter/special_functions.hpp"

namespace tds {

Detector Detector::cartesian(double omega, const Vec3& r) {
  Detector d;
  d.omega = omega;
  d.kind = Kind::cartesian;
  d.r = r;
  d.validate();
  return d;
}

Detector Detector::cylindrical(double omega, double rho, double axial) {
  Detector d;
  d.omega = omega;
  d.kind = Kind::cylindrical;
  d.rho = rho;
  d.axial = axial;
  d.validate();
  return d;
}

void Detector::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("detector omega must be > 0");
  if (kind == Kind::cartesian) {
    const double n = r.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("detector position must be nonzero");
  } else {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("detector rho must be > 0");
    if (!std::isfinite(axial)) throw std::invalid_argument("detector axial offset must be finite");
  }
}

Vec3 Detector::n() const {
  if (kind != Kind::cartesian) throw std::invalid_argument("n() needs a Cartesian detector");
  return r.normalized();
}

Eigen::Matrix3d transverse_projector(const Vec3& q) {
  const double n2 = q.squaredNorm();
  if (!(n2 > 0.0)) throw std::domain_error("transverse_projector: q must be nonzero");
  return Eigen::Matrix3d::Identity() - q * q.transpose() / n2;
}

double transverse_trace(const Tensor3C& zeta, const Vec3& q) {
  const Eigen::Matrix3cd p = transverse_projector(q).cast<Complex>();
  return (zeta * p * zeta.adjoint()).trace().real();
}

namespace {

struct RadialBudget {
  double cutoff;
  double tail;
};

// Cutoff and tail bound from an envelope env(q) >= sup over directions of
// |f(q n)|.  The shell mass 4 pi q^3 env(q) is scanned on a geometric grid
// from well below `hint`; the cutoff is the first radius past the peak
// where it falls under 1e-16 of the peak.
RadialBudget radial_budget(const std::function<double(double)>& env, double hint) {
  auto shell = [&](double q) { return 4.0 * pi * q * q * q * env(q); };
  double peak = 0.0, peak_q = hint;
  double q = hint * 1e-6;
  double cutoff = 0.0;
  for (int i = 0; i < 4000 && q < hint * 1e12; ++i, q *= 1.05) {
    const double s = shell(q);
    if (s > peak) {
      peak = s;
      peak_q = q;
    } else if (q > 2.0 * peak_q && s <= 1e-16 * peak) {
      cutoff = q;
      break;
    }
  }
  if (peak == 0.0) return {hint, 0.0};
  if (cutoff == 0.0) cutoff = q;
  double tail = 0.0;
  double a = cutoff;
  for (int j = 0; j < 60; ++j) {
    const double piece =
        integrate_adaptive([&](double x) { return 4.0 * pi * x * x * env(x); }, a, 2.0 * a, 1e-3,
                           1e-300, 20000, 4)
            .value;
    tail += piece;
    a *= 2.0;
    if (piece <= 1e-6 * tail || piece == 0.0) break;
  }
  return {cutoff, tail};
}

// Mean radius / 3 of q^2 f(q) over a fixed set of 14 directions.
double natural_scale(const Integrand3& f, double cutoff) {
  static const Vec3 dirs[] = {
      Vec3(1, 0, 0),  Vec3(-1, 0, 0), Vec3(0, 1, 0),   Vec3(0, -1, 0),  Vec3(0, 0, 1),
      Vec3(0, 0, -1), Vec3(1, 1, 1),  Vec3(1, 1, -1),  Vec3(1, -1, 1),  Vec3(1, -1, -1),
      Vec3(-1, 1, 1), Vec3(-1, 1, -1), Vec3(-1, -1, 1), Vec3(-1, -1, -1)};
  double num = 0.0, den = 0.0;
  constexpr int kSteps = 400;
  for (const Vec3& d : dirs) {
    const Vec3 u = d.normalized();
    for (int i = 1; i <= kSteps; ++i) {
      const double q = cutoff * (i - 0.5) / kSteps;
      const double w = q * q * std::abs(f(q * u));
      num += q * w;
      den += w;
    }
  }
  if (!(den > 0.0)) return cutoff / 10.0;
  return std::max(num / den / 3.0, cutoff * 1e-6);
}

Q3Problem finish_problem(Integrand3 f, const std::function<double(double)>& env, double hint) {
  const RadialBudget b = radial_budget(env, hint);
  Q3Problem p;
  p.f = std::move(f);
  p.radial_cutoff = b.cutoff;
  p.tail_bound = b.tail;
  p.natural_scale = natural_scale(p.f, b.cutoff);
  return p;
}

}  // namespace

IntensityResult solve(const Q3Problem& problem, const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  s.radial_cutoff = problem.radial_cutoff;
  const auto est = integrate_q3(problem.f, s, problem.tail_bound, problem.singular);
  IntensityResult out;
  out.value = est.value;
  out.error_estimate = est.error_estimate;
  out.evals = est.evals;
  out.truncation_bound = est.truncation_bound;
  out.status = est.status;
  out.parts.vacuum = est.value;
  return out;
}

IntegralEstimate<double> solve_monte_carlo(const Q3Problem& problem, std::size_t samples,
                                           std::uint64_t seed) {
  return monte_carlo_q3(problem.f, samples, seed, problem.natural_scale);
}

// ---------------------------------------------------------------------------

namespace {

double chi_extent(const Profile3D& chi) {
  Vec3 e;
  for (int a = 0; a < 3; ++a)
    e[a] = std::abs(chi.factors[a].center) + chi.factors[a].support_halfwidth();
  return e.norm();
}

double green_factor(bool normalized) { return normalized ? -1.0 / (4.0 * pi) : 1.0; }

}  // namespace

Tensor3C modulated_zeta(const ModulatedDielectric& d, const Detector& det, const Vec3& q,
                        bool normalized_green) {
  const double r = det.r.norm();
  const Vec3 n = det.r / r;
  const double qn = q.norm();
  const Vec3 arg = det.omega * n - (det.omega + qn) / d.w * Vec3::UnitX() + q;
  const Complex s = green_factor(normalized_green) * std::polar(1.0, det.omega * r) / r *
                    std::pow(two_pi, 3) * fourier3d(d.chi, arg);
  const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - n * n.transpose();
  return s * proj.cast<Complex>();
}

void check_far_field(const ModulatedDielectric& d, const Detector& det) {
  d.validate();
  det.validate();
  if (det.kind != Detector::Kind::cartesian)
    throw std::invalid_argument("modulated dielectric needs a Cartesian detector");
  const double r = det.r.norm();
  if (!(det.omega * r > 100.0))
    throw std::invalid_argument("far field requires omega |r| > 100");
  if (!(r >= 10.0 * chi_extent(d.chi)))
    throw std::invalid_argument("far field requires |r| >= 10x the extent of chi");
}

Q3Problem vacuum_modulated_problem(const ModulatedDielectric& d, const Detector& det,
                                   bool normalized_green) {
  check_far_field(d, det);
  const double r = det.r.norm();

  const double omega = det.omega;
  const double pref = std::pow(omega, 4) / (d.w * d.w * std::pow(two_pi, 4));
  const Vec3 n = det.n();
  const Complex phase = std::polar(1.0, omega * r) / r;
  const double g = green_factor(normalized_green);
  auto f = [d, pref, n, phase, g, omega](const Vec3& q) -> double {
    const double qn = q.norm();
    if (!(qn > 0.0)) return 0.0;
    const double eta = std::abs(fourier1d(d.eta, (omega + qn) / d.w));
    if (eta == 0.0) return 0.0;
    const Vec3 arg = omega * n - (omega + qn) / d.w * Vec3::UnitX() + q;
    const double s = std::abs(g * phase * std::pow(two_pi, 3) * fourier3d(d.chi, arg));
    // Tr((delta - nn) P (delta - nn)) = 1 + (n.q)^2 / q^2
    const double nq = n.dot(q) / qn;
    return pref * qn * eta * eta * s * s * (1.0 + nq * nq);
  };
  double chi_bound = std::pow(two_pi, 3);
  for (const auto& fac : d.chi.factors) chi_bound *= spectral_envelope(fac, 0.0);
  const double s_max = std::abs(g) / r * chi_bound;
  auto env = [d, pref, s_max, omega](double q) {
    const double e = spectral_envelope(d.eta, (omega + q) / d.w);
    return pref * q * e * e * s_max * s_max * 2.0;
  };
  return finish_problem(f, env, omega + d.w / d.eta.width);
}

IntensityResult vacuum_modulated(const ModulatedDielectric& d, const Detector& det,
                                 const QuadratureSpec& spec, bool normalized_green) {
  return solve(vacuum_modulated_problem(d, det, normalized_green), spec);
}

// ---------------------------------------------------------------------------

std::string_view to_string(RodTensorSign sign) {
  return sign == RodTensorSign::opposite ? "opposite" : "green_consistent";
}

std::string_view to_string(CovariantKinematics k) {
  return k == CovariantKinematics::direct ? "direct" : "polarization_sum";
}

double rod_vacuum_b(double omega, double v, const Vec3& q) { return (omega + q.norm()) / v - q.x(); }

Tensor3C rod_zeta_tensor(double omega, double rho, double b, RodTensorSign sign) {
  if (!(rho > 0.0)) throw std::domain_error("rod_zeta_tensor: rho must be > 0");
  const double ab = std::abs(b);
  const double diff = (ab - omega) * (ab + omega);
  if (!(diff > 0.0)) throw std::domain_error("rod_zeta_tensor: requires b^2 > omega^2");
  const double kappa = std::sqrt(diff);
  const double x = kappa * rho;
  const double k0 = bessel_k0(x);
  const double k1 = bessel_k1(x);
  // Second derivatives of e^{ibx} K0(kappa sqrt(y^2+z^2)) at (0, rho, 0).
  Tensor3C dd = Tensor3C::Zero();
  dd(0, 0) = -b * b * k0;
  dd(1, 1) = kappa * kappa * (k0 + k1 / x);
  dd(2, 2) = -kappa * k1 / rho;
  dd(0, 1) = dd(1, 0) = -I * b * kappa * k1;
  const double s = sign == RodTensorSign::opposite ? -1.0 : 1.0;
  Tensor3C m = k0 * Tensor3C::Identity() + (s / (omega * omega)) * dd;
  return (-1.0 / two_pi) * m;
}

namespace {

void require_cylindrical(const Detector& det, const char* who) {
  det.validate();
  if (det.kind != Detector::Kind::cylindrical)
    throw std::invalid_argument(std::string(who) + " needs a cylindrical detector");
}

// Lower bound on |b| over directions at radius q: (w+q)/|v| - q > w.
double b_min(double omega, double av, double q) { return (omega + q) / av - q; }
double b_max(double omega, double av, double q) { return (omega + q) / av + q; }

double rod_hint(const MovingRod& m, double omega, double rho) {
  const double av = std::abs(m.v);
  const double spectral = m.pointlike ? INFINITY : 1.0 / (m.inv_gamma_v() * m.profile.width);
  const double kernel = 1.0 / (rho * (1.0 / av - 1.0) + 1e-300);
  return omega + std::min(spectral, kernel);
}

}  // namespace

Q3Problem vacuum_rod_tensor_problem(const MovingRod& m, const Detector& det, RodTensorSign sign) {
  m.validate();
  require_cylindrical(det, "vacuum_rod_tensor");
  const double omega = det.omega, rho = det.rho, v = m.v;
  const double g = m.gamma();
  const double s = m.inv_gamma_v();
  const double pref = std::pow(omega, 4) / (v * v * g * g * std::pow(two_pi, 4));
  auto f = [m, omega, rho, v, s, pref, sign](const Vec3& q) -> double {
    const double qn = q.norm();
    if (!(qn > 0.0)) return 0.0;
    const double eps = std::abs(m.rest_spectrum((omega + qn) * s));
    if (eps == 0.0) return 0.0;
    const double b = rod_vacuum_b(omega, v, q);
    const Tensor3C zeta = rod_zeta_tensor(omega, rho, b, sign);
    return pref * qn * eps * eps * transverse_trace(zeta, q);
  };
  const double av = std::abs(v);
  auto env = [m, omega, rho, av, s, pref](double q) {
    const double e = m.rest_envelope((omega + q) * s);
    if (e == 0.0) return 0.0;
    const double bl = b_min(omega, av, q), bh = b_max(omega, av, q);
    const double kl = std::sqrt((bl - omega) * (bl + omega));
    const double kh = std::sqrt((bh - omega) * (bh + omega));
    const double x = kl * rho;
    const double k0 = bessel_k0(x), k1 = bessel_k1(x);
    const double w2 = omega * omega;
    const double xx = k0 + bh * bh * k0 / w2;
    const double yy = k0 + kh * kh * (k0 + k1 / x) / w2;
    const double zz = k0 + kh * k1 / (rho * w2);
    const double xy = bh * kh * k1 / w2;
    const double frob2 = (xx * xx + yy * yy + zz * zz + 2.0 * xy * xy) / (two_pi * two_pi);
    return pref * q * e * e * frob2;
  };
  return finish_problem(f, env, rod_hint(m, omega, rho));
}

IntensityResult vacuum_rod_tensor(const MovingRod& m, const Detector& det,
                                  const QuadratureSpec& spec, RodTensorSign sign) {
  return solve(vacuum_rod_tensor_problem(m, det, sign), spec);
}

double covariant_kinematic_factor(double v, const Vec3& m, CovariantKinematics k) {
  const double a = 1.0 - v * m.x();
  const double m2 = m.y();
  double inner = v * v * m2 * m2 + a * a;
  if (k == CovariantKinematics::polarization_sum) inner -= m2 * m2;
  return a * a * inner;
}

Q3Problem vacuum_rod_covariant_problem(const MovingRod& m, const Detector& det,
                                       CovariantKinematics k) {
  m.validate();
  require_cylindrical(det, "vacuum_rod_covariant");
  const double omega = det.omega, rho = det.rho, v = m.v;
  const double g = m.gamma();
  const double s = m.inv_gamma_v();
  const double pref = std::pow(g, 4) / (16.0 * std::pow(pi, 4));
  auto f = [m, omega, rho, v, s, pref, k](const Vec3& q) -> double {
    const double qn = q.norm();
    if (!(qn > 0.0)) return 0.0;
    const double eps = std::abs(m.rest_spectrum((omega + qn) * s));
    if (eps == 0.0) return 0.0;
    const CylinderKernel ker = cylinder_kernel(rho, rod_vacuum_b(omega, v, q), omega);
    const double nu2 = s * s * eps * eps * std::norm(ker.value);
    return pref * qn * qn * qn * nu2 * covariant_kinematic_factor(v, q / qn, k);
  };
  const double av = std::abs(v);
  auto env = [m, omega, rho, av, s, pref](double q) {
    const double e = m.rest_envelope((omega + q) * s);
    if (e == 0.0) return 0.0;
    const double bl = b_min(omega, av, q);
    const double kl = std::sqrt((bl - omega) * (bl + omega));
    const double ker = bessel_k0(kl * rho) / two_pi;
    const double kin = (1.0 + av) * (1.0 + av) * (av * av + (1.0 + av) * (1.0 + av));
    return pref * q * q * q * s * s * e * e * ker * ker * kin;
  };
  return finish_problem(f, env, rod_hint(m, omega, rho));
}

IntensityResult vacuum_rod_covariant(const MovingRod& m, const Detector& det,
                                     const QuadratureSpec& spec, CovariantKinematics k) {
  return solve(vacuum_rod_covariant_problem(m, det, k), spec);
}

}  // namespace tds

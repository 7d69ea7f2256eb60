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

#ifndef TDSCATTER_VACUUM_HPP
#define TDSCATTER_VACUUM_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "tdscatter/dielectric.hpp"
#include "tdscatter/quadrature.hpp"
#include "tdscatter/types.hpp"

namespace tds {

/// Photodetector: frequency and either a Cartesian position (modulated
/// dielectric) or a distance from the rod axis plus an axial offset.
struct Detector {
  enum class Kind { cartesian, cylindrical };

  double omega = 1.0;
  Kind kind = Kind::cartesian;
  Vec3 r = Vec3::UnitY();
  double rho = 1.0;
  double axial = 0.0;

  static Detector cartesian(double omega, const Vec3& r);
  static Detector cylindrical(double omega, double rho, double axial = 0.0);

  /// Throws std::invalid_argument unless omega > 0 and |r| > 0 (or rho > 0).
  void validate() const;
  /// r / |r| (Cartesian detectors only).
  Vec3 n() const;
};

struct IntensityParts {
  double vacuum = 0.0;
  double photon_plus = 0.0;
  double photon_minus = 0.0;
  /// Coherent-state interference term (already signed).
  double cross = 0.0;
};

struct IntensityResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evals = 0;
  IntensityParts parts;
  double truncation_bound = 0.0;
  QuadStatus status = QuadStatus::converged;

  bool tolerance_met() const { return status == QuadStatus::converged; }
};

/**
 * A 3D momentum integral \int d^3q f(q) ready for integrate_q3 or
 * monte_carlo_q3.  radial_cutoff and tail_bound come from an upper envelope
 * of |f| over directions; natural_scale is a mean radius / 3 used as the
 * Monte Carlo importance scale.
 */
struct Q3Problem {
  Integrand3 f;
  double radial_cutoff = 0.0;
  double tail_bound = 0.0;
  double natural_scale = 1.0;
  SingularRadii singular;
};

/// Evaluates a problem with integrate_q3; spec.radial_cutoff is replaced by
/// the problem's cutoff.
IntensityResult solve(const Q3Problem& problem, const QuadratureSpec& spec);
/// Same problem through the Monte Carlo oracle.
IntegralEstimate<double> solve_monte_carlo(const Q3Problem& problem, std::size_t samples,
                                           std::uint64_t seed);

/// delta - q q / |q|^2
Eigen::Matrix3d transverse_projector(const Vec3& q);
/// Tr(zeta P zeta^dagger) with P the transverse projector of q.
double transverse_trace(const Tensor3C& zeta, const Vec3& q);

// ---------------------------------------------------------------------------
// Modulated dielectric, far field.

/// Far-field zeta tensor for vacuum mode q (|q| = q):
///   g (delta - n n) (e^{i w r}/r) (2 pi)^3 chi[w n - (w + q) x/w_mod + q],
/// with g = -1/(4 pi) (normalized) or 1 (verbatim far-field Green function).
Tensor3C modulated_zeta(const ModulatedDielectric& d, const Detector& det, const Vec3& q,
                        bool normalized_green = true);

/// std::invalid_argument unless det is Cartesian with w |r| > 100 and |r| at
/// least ten times the extent of chi.
void check_far_field(const ModulatedDielectric& d, const Detector& det);

Q3Problem vacuum_modulated_problem(const ModulatedDielectric& d, const Detector& det,
                                   bool normalized_green = true);

/**
 * I[w, r; vacuum] = w^4/(w_mod^2 (2 pi)^4) \int d^3q q |eta[(w+q)/w_mod]|^2
 *                   Tr(zeta P zeta^dagger)
 * with the far-field zeta above.  Requires w |r| > 100 and |r| at least ten
 * times the extent of chi; std::invalid_argument otherwise.
 */
IntensityResult vacuum_modulated(const ModulatedDielectric& d, const Detector& det,
                                 const QuadratureSpec& spec, bool normalized_green = true);

// ---------------------------------------------------------------------------
// Moving thin rod.

/// Sign in front of the second-derivative term of the rod tensor kernel.
///   green_consistent:  (delta + d d / w^2) K0   (what the Green tensor gives)
///   opposite:          (delta - d d / w^2) K0
enum class RodTensorSign { green_consistent, opposite };

std::string_view to_string(RodTensorSign sign);

/**
 * -(1/2pi) (delta +- d d / w^2) [e^{i b x} K0(kappa rho_vec)] at the detector
 * (x, y, z) = (0, rho, 0), kappa = sqrt(b^2 - w^2) > 0, without the e^{ibx}
 * phase.  Second derivatives are analytic (K0' = -K1, K0'' = K0 + K1/x).
 * std::domain_error if b^2 <= w^2.
 */
Tensor3C rod_zeta_tensor(double omega, double rho, double b,
                         RodTensorSign sign = RodTensorSign::green_consistent);

/// b = (w + q)/v - q_1 for the vacuum rod integrals.
double rod_vacuum_b(double omega, double v, const Vec3& q);

Q3Problem vacuum_rod_tensor_problem(const MovingRod& m, const Detector& det,
                                    RodTensorSign sign = RodTensorSign::green_consistent);

/**
 * I~[w, rho; vacuum] = w^4/(v^2 gamma^2 (2 pi)^4) \int d^3q q
 *                      |eps[(w+q)/(v gamma)]|^2 Tr(zeta P zeta^dagger).
 * Every integrand sample satisfies b^2 > w^2 (asserted).
 */
IntensityResult vacuum_rod_tensor(const MovingRod& m, const Detector& det,
                                  const QuadratureSpec& spec,
                                  RodTensorSign sign = RodTensorSign::green_consistent);

/// Kinematic factor of the covariant vacuum integral.
///   direct:            (1 - v m1)^2 (v^2 m2^2 + (1 - v m1)^2)
///   polarization_sum:  (1 - v m1)^2 (v^2 m2^2 + (1 - v m1)^2 - m2^2)
/// The second is \sum_alpha over both transverse polarizations of the
/// squared amplitude factor; the first omits the -m2^2 from completeness.
enum class CovariantKinematics { direct, polarization_sum };

std::string_view to_string(CovariantKinematics k);

double covariant_kinematic_factor(double v, const Vec3& m, CovariantKinematics k);

Q3Problem vacuum_rod_covariant_problem(const MovingRod& m, const Detector& det,
                                       CovariantKinematics k = CovariantKinematics::direct);

/**
 * A-field vacuum intensity of the thin rod:
 *   gamma^4/(16 pi^4) \int d^3q q^3 |nu|^2 kin(v, q/|q|),
 *   |nu|^2 = (1/(gamma |v|))^2 |eps[(w+q)/(gamma v)]|^2 |cylinder_kernel(rho, b, w)|^2.
 * Independent of the detector's axial offset.
 */
IntensityResult vacuum_rod_covariant(const MovingRod& m, const Detector& det,
                                     const QuadratureSpec& spec,
                                     CovariantKinematics k = CovariantKinematics::direct);

}  // namespace tds

#endif  // TDSCATTER_VACUUM_HPP

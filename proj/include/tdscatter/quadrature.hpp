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

#ifndef TDSCATTER_QUADRATURE_HPP
#define TDSCATTER_QUADRATURE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "tdscatter/types.hpp"

namespace tds {

enum class Axis { x = 0, y = 1, z = 2 };

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-300;
  std::size_t max_evals = 200'000'000;
  /// Radial truncation |q| <= radial_cutoff (3D), or the core half-width of
  /// an infinite line integral.
  double radial_cutoff = 50.0;
  /// Half-width of the interval removed around a flagged radial log singularity.
  double singular_exclusion = 1e-8;
  /// Initial Gauss-Legendre nodes in cos(theta).
  int theta_order = 32;
  /// Initial equispaced nodes in phi (the Gauss rule for periodic integrands).
  int phi_order = 64;
  /// Both angular orders double until the angular error meets the target or
  /// theta would exceed this.
  int max_theta_order = 256;
  /// Polar axis of the angular rule.  The physics is anisotropic about x.
  Axis polar_axis = Axis::x;
  /// Worker threads for the angular sweep; results do not depend on it.
  int threads = 1;

  /// Throws std::invalid_argument on non-positive tolerances, max_evals < 1000,
  /// non-positive cutoff or orders.
  void validate() const;
};

enum class QuadStatus { converged, tolerance_not_met, max_evals_exceeded };

std::string_view to_string(QuadStatus status);

template <class T>
struct IntegralEstimate {
  T value{};
  double error_estimate = 0.0;
  std::size_t evals = 0;
  /// Part of error_estimate attributed to truncation or exclusion.
  double truncation_bound = 0.0;
  QuadStatus status = QuadStatus::converged;

  bool converged() const { return status == QuadStatus::converged; }
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Adaptive Gauss-Kronrod (7/15) on [a, b], bisecting the worst panel
/// until the summed |K15 - G7| meets max(abs_tol, rel_tol |I|).
IntegralEstimate<double> integrate_adaptive(const std::function<double(double)>& f, double a,
                                            double b, double rel_tol, double abs_tol,
                                            std::size_t max_evals, int initial_panels = 1);
IntegralEstimate<Complex> integrate_adaptive_complex(const std::function<Complex(double)>& f,
                                                     double a, double b, double rel_tol, double abs_tol,
                                             std::size_t max_evals, int initial_panels = 1);

using Integrand3 = std::function<double(const Vec3&)>;
/// Radii along a unit direction at which the integrand has an integrable
/// logarithmic singularity.
using SingularRadii = std::function<std::vector<double>(const Vec3&)>;

/**
 * \int_{|q| < radial_cutoff} d^3q f(q).
 *
 * Angular product rule (Gauss-Legendre in cos(theta) about spec.polar_axis,
 * equispaced phi) outside, adaptive Gauss-Kronrod in |q| inside.  Each
 * direction's radial error target is max(abs_tol/4pi, rel_tol |I_dir|).
 * The angular error is the difference to the rule of half the orders;
 * orders double while it misses the target.
 * `tail_bound` (caller's estimate of the |q| > cutoff contribution) is added
 * to both error_estimate and truncation_bound.  Singular radii are cut out
 * with a +-singular_exclusion window whose bound is added as well.
 */
IntegralEstimate<double> integrate_q3(const Integrand3& f, const QuadratureSpec& spec,
                                      double tail_bound = 0.0, const SingularRadii& singular = {});

/**
 * Plain Monte Carlo for \int d^3q f(q) with density
 *   p(q) = e^{-|q|/scale} / (8 pi scale^3)
 * (exponential radial, uniform angular).  error_estimate is the standard
 * error.  Samples are drawn in fixed-size blocks, each from its own
 * generator seeded by (seed, block), and reduced in block order, so the
 * result is bit-identical for a given seed.
 */
IntegralEstimate<double> monte_carlo_q3(const Integrand3& f, std::size_t n_samples,
                                        std::uint64_t seed, double scale);

/**
 * \int_lo^hi g(x) dx for oscillatory g whose phase advances at most at
 * `phase_rate` per unit length.
 *
 * The finite part (|x| <= spec.radial_cutoff when a bound is infinite) is
 * split into panels no wider than pi/(4 phase_rate) and refined adaptively.
 * Infinite tails are summed over half-periods pi/phase_rate (doubling
 * panels when phase_rate == 0) and accelerated with Wynn's epsilon
 * algorithm; the last extrapolation increment is the truncation bound.
 */
IntegralEstimate<Complex> integrate_line_oscillatory(
    const std::function<Complex(double)>& g, double phase_rate, const QuadratureSpec& spec,
    double lo = -std::numeric_limits<double>::infinity(),
    double hi = std::numeric_limits<double>::infinity());

/// Wynn epsilon extrapolation of partial sums; returns (limit, error estimate).
std::pair<Complex, double> wynn_epsilon(const std::vector<Complex>& partial_sums);

/// Unit vector for the angular node (cos_theta, phi) about `polar`.
Vec3 direction_about(Axis polar, double cos_theta, double phi);

}  // namespace tds

#endif  // TDSCATTER_QUADRATURE_HPP

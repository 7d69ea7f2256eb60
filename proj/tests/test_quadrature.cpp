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

#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "tdscatter/quadrature.hpp"

using namespace tds;

namespace {

struct AnalyticCase {
  const char* name;
  Integrand3 f;
  double exact;
  double cutoff;
  double tail;
  // The angular rule is exact for isotropic integrands, so their error is
  // purely radial and must shrink with the tolerance.  An off-centre case
  // has a fixed angular floor that radial refinement can straddle.
  bool isotropic;
};

// Lorentzian 1/(1+q^2)^3 restricted to |q| < Q:
//   4 pi \int_0^Q q^2 (1+q^2)^-3 dq = (pi/2) [atan Q + Q (Q^2-1)/(1+Q^2)^2].
double lorentzian_ball(double Q) {
  return 0.5 * pi * (std::atan(Q) + Q * (Q * Q - 1.0) / ((1.0 + Q * Q) * (1.0 + Q * Q)));
}
std::vector<AnalyticCase> analytic_set() {
  return {
      {"gaussian", [](const Vec3& q) { return std::exp(-q.squaredNorm()); }, std::pow(pi, 1.5), 12.0, 0.0, true},
      {"exponential", [](const Vec3& q) { return std::exp(-q.norm()); }, 8.0 * pi, 60.0, 0.0, true},
      {"lorentzian", [](const Vec3& q) { return std::pow(1.0 + q.squaredNorm(), -3.0); },
       lorentzian_ball(40.0), 40.0, 0.0, true},
      {"shifted gaussian",
       [](const Vec3& q) { return std::exp(-(q - Vec3(0.7, -0.3, 0.2)).squaredNorm() / 0.5); },
       std::pow(pi * 0.5, 1.5), 12.0, 0.0, false},
  };
}

}  // namespace

TEST_CASE("spec validation") {
  QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.max_evals = 999;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.radial_cutoff = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 16, 33, 128}) {
    const GaussRule r = gauss_legendre(n);
    double sw = 0.0, m2 = 0.0, mhigh = 0.0;
    for (int i = 0; i < n; ++i) {
      sw += r.weights[i];
      m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
      mhigh += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
    }
    CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
    if (n >= 2) CHECK(m2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(mhigh == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    for (int i = 0; i + 1 < n; ++i) CHECK(r.nodes[i] < r.nodes[i + 1]);
  }
}

TEST_CASE("adaptive 1D") {
  auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-300, 100000);
  CHECK(r.converged());
  CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-10);
  CHECK(std::abs(r.value - 2.0 / 3.0) <= 2.0 * r.error_estimate);
  auto c = integrate_adaptive_complex([](double x) { return std::polar(1.0, 3.0 * x); }, 0.0, 2.0, 1e-12, 1e-300,
                              100000);
  CHECK(std::abs(c.value - (std::polar(1.0, 6.0) - 1.0) / (3.0 * I)) < 1e-12);
  auto capped = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-15, 1e-300, 1000);
  CHECK(capped.status == QuadStatus::max_evals_exceeded);
  CHECK(capped.evals <= 1000);
}

TEST_CASE("3D Gaussian and exponential examples") {
  QuadratureSpec s;
  s.rel_tol = 1e-8;
  s.radial_cutoff = 12.0;
  auto g = integrate_q3([](const Vec3& q) { return std::exp(-q.squaredNorm()); }, s);
  CHECK(g.converged());
  CHECK(std::abs(g.value / std::pow(pi, 1.5) - 1.0) < 1e-8);
  s.radial_cutoff = 60.0;
  auto e = integrate_q3([](const Vec3& q) { return std::exp(-q.norm()); }, s);
  CHECK(std::abs(e.value / (8.0 * pi) - 1.0) < 1e-8);
  CHECK(e.evals <= s.max_evals);
}

TEST_CASE("error honesty and monotone refinement on the analytic set") {
  int honest = 0, total = 0;
  for (const auto& c : analytic_set()) {
    double last_err = INFINITY;
    for (double tol : {1e-3, 5e-4, 2.5e-4, 1.25e-4, 1e-5, 5e-6, 1e-7, 5e-8}) {
      QuadratureSpec s;
      s.rel_tol = tol;
      s.radial_cutoff = c.cutoff;
      const auto r = integrate_q3(c.f, s, c.tail);
      const double err = std::abs(r.value - c.exact);
      ++total;
      if (err <= 2.0 * r.error_estimate + 1e-15 * std::abs(c.exact)) ++honest;
      INFO(std::string(c.name), " tol=", tol, " err=", err, " last=", last_err);
      if (c.isotropic) CHECK(err <= last_err * (1.0 + 1e-9) + 1e-14 * std::abs(c.exact));
      else CHECK(err <= std::max(r.error_estimate, tol * std::abs(c.exact)));
      last_err = std::min(last_err, err);
      CHECK(r.error_estimate >= 0.0);
    }
  }
  CHECK(honest >= 0.95 * total);
}

TEST_CASE("tail bound enters error and truncation") {
  QuadratureSpec s;
  s.radial_cutoff = 12.0;
  auto r = integrate_q3([](const Vec3& q) { return std::exp(-q.squaredNorm()); }, s, 1e-3);
  CHECK(r.truncation_bound == doctest::Approx(1e-3));
  CHECK(r.error_estimate >= 1e-3);
  CHECK(r.status == QuadStatus::tolerance_not_met);
}

TEST_CASE("singular radii are excluded with a bound") {
  // f = ln|q - 1| e^{-q^2}: integrable log singularity on the unit sphere.
  QuadratureSpec s;
  s.rel_tol = 1e-7;
  s.radial_cutoff = 10.0;
  auto f = [](const Vec3& q) { return std::log(std::abs(q.norm() - 1.0)) * std::exp(-q.squaredNorm()); };
  auto r = integrate_q3(f, s, 0.0, [](const Vec3&) { return std::vector<double>{1.0}; });
  // Reference: 4 pi \int q^2 ln|q-1| e^{-q^2} dq by splitting at q = 1.
  auto g = [](double q) { return 4.0 * pi * q * q * std::log(std::abs(q - 1.0)) * std::exp(-q * q); };
  const double ref = integrate_adaptive(g, 0.0, 1.0, 1e-13, 1e-300, 10000000).value +
                     integrate_adaptive(g, 1.0, 10.0, 1e-13, 1e-300, 10000000).value;
  CHECK(r.truncation_bound > 0.0);
  CHECK(std::abs(r.value - ref) <= r.error_estimate);
  CHECK(std::abs(r.value - ref) < 1e-6 * std::abs(ref));
}

TEST_CASE("deterministic and thread independent") {
  auto f = [](const Vec3& q) { return std::exp(-(q - Vec3(0.5, 0.1, 0.0)).squaredNorm()) * (1.0 + q.x() * q.x()); };
  QuadratureSpec s;
  s.radial_cutoff = 12.0;
  const auto a = integrate_q3(f, s);
  const auto b = integrate_q3(f, s);
  s.threads = 3;
  const auto c = integrate_q3(f, s);
  CHECK(a.value == b.value);
  CHECK(a.value == c.value);
  CHECK(a.error_estimate == c.error_estimate);
  CHECK(a.evals == c.evals);
}

TEST_CASE("polar axis choice does not change an isotropic result") {
  QuadratureSpec s;
  s.radial_cutoff = 12.0;
  s.rel_tol = 1e-10;
  auto f = [](const Vec3& q) { return std::exp(-q.squaredNorm()); };
  const double x = integrate_q3(f, s).value;
  s.polar_axis = Axis::z;
  CHECK(integrate_q3(f, s).value == doctest::Approx(x).epsilon(1e-13));
}

TEST_CASE("Monte Carlo oracle") {
  auto f = [](const Vec3& q) { return std::exp(-q.squaredNorm()); };
  const auto a = monte_carlo_q3(f, 1000000, 42, 0.5);
  CHECK(std::abs(a.value - std::pow(pi, 1.5)) <= 3.0 * a.error_estimate);
  const auto b = monte_carlo_q3(f, 1000000, 42, 0.5);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  const auto c = monte_carlo_q3(f, 1000000, 43, 0.5);
  CHECK(a.value != c.value);
  CHECK_THROWS_AS(monte_carlo_q3(f, 1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("Monte Carlo error bars widen for a hidden spike") {
  auto smooth = [](const Vec3& q) { return std::exp(-q.squaredNorm()); };
  auto spiky = [](const Vec3& q) {
    const double s = (q - Vec3(1.5, 0.0, 0.0)).squaredNorm();
    return std::exp(-q.squaredNorm()) + 500.0 * std::exp(-s / 1e-2);
  };
  const auto a = monte_carlo_q3(smooth, 200000, 5, 0.5);
  const auto b = monte_carlo_q3(spiky, 200000, 5, 0.5);
  CHECK(b.error_estimate > 3.0 * a.error_estimate);
  const double exact = std::pow(pi, 1.5) + 500.0 * std::pow(pi * 1e-2, 1.5);
  CHECK(std::abs(b.value - exact) <= 4.0 * b.error_estimate);
}

TEST_CASE("line integrals") {
  QuadratureSpec s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-14;
  s.radial_cutoff = 10.0;
  auto g = integrate_line_oscillatory([](double x) { return Complex(std::exp(-x * x)); }, 0.0, s);
  CHECK(std::abs(g.value - std::sqrt(pi)) < 1e-10);
  const double b = 2.7, T = 13.0;
  auto p = integrate_line_oscillatory([&](double x) { return std::polar(1.0, b * x); }, b, s, -T, T);
  CHECK(std::abs(p.value - 2.0 * std::sin(b * T) / b) < 1e-10);
  // \int_0^inf sin(x)/x dx = pi/2
  auto d = integrate_line_oscillatory(
      [](double x) { return Complex(x == 0.0 ? 1.0 : std::sin(x) / x); }, 1.0, s, 0.0);
  CHECK(std::abs(d.value.real() - pi / 2.0) < 1e-8);
  CHECK(d.truncation_bound >= 0.0);
  CHECK_THROWS_AS(integrate_line_oscillatory([](double) { return Complex(1.0); }, 1.0, s, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("Wynn epsilon on an alternating series") {
  std::vector<Complex> s;
  Complex run = 0.0;
  for (int k = 0; k < 20; ++k) {
    run += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1.0);
    s.push_back(run);
  }
  auto [lim, err] = wynn_epsilon(s);
  CHECK(std::abs(lim - std::log(2.0)) < 1e-12);
  CHECK(err < 1e-8);
}

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
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tdscatter/quadrature.hpp"
#include "tdscatter/special_functions.hpp"

using namespace tds;

namespace {

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gaussian transform at zero and infinity") {
  const Profile1D g = gaussian_profile(1.0, 1.0);
  CHECK(fourier1d(g, 0.0).real() == doctest::Approx(1.0 / std::sqrt(two_pi)).epsilon(1e-15));
  CHECK(std::abs(oracle::fourier1d_quadrature(g, 0.0) - fourier1d(g, 0.0)) < 1e-14);
  CHECK(std::abs(fourier1d(g, 50.0)) < 1e-300);
}

TEST_CASE("transform at zero is the integral over 2 pi") {
  for (const Profile1D& p : {gaussian_profile(2.5, 0.7, 0.3), tophat_profile(-1.5, 2.0, -1.0)}) {
    CHECK(std::abs(fourier1d(p, 0.0) - p.integral() / two_pi) < 1e-14);
  }
}

TEST_CASE("closed-form transforms match direct quadrature") {
  const Profile1D profiles[] = {gaussian_profile(1.3, 0.8, 0.4), tophat_profile(0.7, 1.5, -0.6),
                                tophat_profile(2.0, 0.3, 0.0)};
  for (const auto& p : profiles) {
    for (double kappa : {0.0, 0.37, -1.9, 4.0, 7.3, -12.5, 2.0 * pi / (0.5 * p.width)}) {
      const Complex ref = oracle::fourier1d_quadrature(p, kappa);
      const Complex got = fourier1d(p, kappa);
      CHECK(std::abs(got - ref) <= 1e-12 * std::abs(fourier1d(p, 0.0)));
    }
  }
}

TEST_CASE("top-hat transform is smooth through the removable point") {
  const Profile1D p = tophat_profile(1.0, 2.0);
  // 2u = pi at kappa = 2 pi / (l/2) ... u = kappa l / 4.
  const double k0 = 2.0 * pi / p.width;
  const Complex at = fourier1d(p, k0);
  const Complex near = fourier1d(p, k0 * (1.0 + 1e-9));
  CHECK(std::isfinite(at.real()));
  CHECK(std::abs(at - near) < 1e-9);
  CHECK(std::abs(at - oracle::fourier1d_quadrature(p, k0)) < 1e-13);
}

TEST_CASE("shift theorem at random triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const bool gauss = i % 2 == 0;
    const double width = 0.2 + std::abs(u(rng));
    const double kappa = 2.0 * u(rng);
    const double x0 = u(rng);
    Profile1D p = gauss ? gaussian_profile(u(rng), width) : tophat_profile(u(rng), width);
    const Complex base = fourier1d(p, kappa);
    p.center = x0;
    CHECK(std::abs(fourier1d(p, kappa) - base * std::polar(1.0, kappa * x0)) < 1e-12);
  }
}

TEST_CASE("3D transform is the product with sign-flipped arguments") {
  Profile3D chi{{gaussian_profile(1.0, 0.5, 0.2), tophat_profile(2.0, 1.0), gaussian_profile(0.5, 2.0)}};
  const Vec3 q(0.7, -1.1, 0.3);
  // Direct separable quadrature of e^{-i q.r} chi(r) / (2 pi)^3.
  Complex ref = 1.0;
  for (int a = 0; a < 3; ++a) ref *= oracle::fourier1d_quadrature(chi.factors[a], -q[a]);
  CHECK(rel_err(fourier3d(chi, q), ref) < 1e-12);
}

TEST_CASE("spectral envelope bounds the transform and is monotone") {
  for (const Profile1D& p : {gaussian_profile(1.0, 0.9, 0.5), tophat_profile(-2.0, 1.3, 0.2)}) {
    double last = spectral_envelope(p, 0.0);
    for (double k = 0.0; k < 60.0; k += 0.013) {
      CHECK(std::abs(fourier1d(p, k)) <= spectral_envelope(p, k) * (1.0 + 1e-12));
      CHECK(std::abs(fourier1d(p, -k)) <= spectral_envelope(p, -k) * (1.0 + 1e-12));
      const double e = spectral_envelope(p, k);
      CHECK(e <= last);
      last = e;
    }
    const double kc = spectral_cutoff(p, 1e-8);
    CHECK(spectral_envelope(p, kc) <= 1e-8 * spectral_envelope(p, 0.0) * (1.0 + 1e-9));
    CHECK(spectral_envelope(p, 0.99 * kc) > 1e-8 * spectral_envelope(p, 0.0));
  }
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(gaussian_profile(1.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(tophat_profile(NAN, 1.0).validate(), std::invalid_argument);
  CHECK(profile_kind_from_string("smoothed_tophat") == ProfileKind::smoothed_tophat);
  CHECK_THROWS_AS(profile_kind_from_string("box"), std::invalid_argument);
  const Profile1D t = tophat_profile(3.0, 2.0, 1.0);
  CHECK(t(1.0) == 3.0);
  CHECK(t(1.9) > 0.0);
  CHECK(t(3.0) == 0.0);
  CHECK(t(1.0 + 1.5) == doctest::Approx(1.5));
}

TEST_CASE("J0 frozen values and angular oracle") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j0(2.40482555769577)) < 1e-10);
  CHECK(std::abs(bessel_j0(5.0) - oracle::j0_angular(5.0)) < 1e-10);
  CHECK(bessel_j0(1.0) == doctest::Approx(0.765197686557966551449717526103).epsilon(1e-14));
  CHECK(bessel_j0(-3.7) == doctest::Approx(-0.399230203371191105766124657652).epsilon(1e-13));
  for (double x = 0.0; x <= 20.0; x += 0.25)
    CHECK(std::abs(bessel_j0(x) - oracle::j0_angular(x)) < 1e-10);
}

TEST_CASE("J0 first root located by bisection on the oracle") {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::j0_angular(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(bessel_j0(0.5 * (lo + hi))) < 1e-10);
}

TEST_CASE("K0 and K1 frozen values") {
  CHECK(bessel_k0(1.0) == doctest::Approx(0.421024438240708333335627379213).epsilon(1e-13));
  CHECK(bessel_k0(12.0) == doctest::Approx(2.20082539731149140051559977455e-6).epsilon(1e-12));
  CHECK(bessel_k1(0.5) == doctest::Approx(1.65644112000330089369644540317).epsilon(1e-13));
  CHECK(bessel_k1(3.7) == doctest::Approx(0.0176280351022232666879950105972).epsilon(1e-13));
  CHECK(std::abs(bessel_k0(1.0) - oracle::k0_cosh(1.0)) < 1e-9);
}

TEST_CASE("K0 asymptotic forms") {
  const double big = std::sqrt(pi / 20.0) * std::exp(-10.0);
  CHECK(std::abs(bessel_k0(10.0) / big - 1.0) < 0.015);
  const double small = std::log(2.0 * std::exp(-euler_gamma) / 1e-4);
  CHECK(std::abs(bessel_k0(1e-4) / small - 1.0) < 1e-6);
}

TEST_CASE("K0 and K1 against integral representations") {
  for (double x : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0}) {
    const double k0 = bessel_k0(x);
    CHECK(std::abs(k0 - oracle::k0_cosh(x)) <= 1e-10 * k0);
    CHECK(std::abs(bessel_k1(x) - oracle::k1_cosh(x)) <= 1e-10 * bessel_k1(x));
  }
}

TEST_CASE("the two K0 representations agree") {
  for (double x : {1e-3, 0.03, 0.4, 1.0, 3.0, 8.0, 15.0, 30.0}) {
    const double a = oracle::k0_cosh(x);
    const double b = oracle::k0_cosine(x);
    CHECK(std::abs(a - b) <= 1e-8 * a);
  }
}

TEST_CASE("K0 strictly decreasing on [0.1, 30]") {
  double last = bessel_k0(0.1);
  for (double x = 0.2; x <= 30.0; x += 0.1) {
    const double k = bessel_k0(x);
    CHECK(k < last);
    last = k;
  }
}

TEST_CASE("Bessel domain errors") {
  CHECK_THROWS_AS(bessel_k0(0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k1(-1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_y0(0.0), std::domain_error);
  CHECK_THROWS_AS(hankel1_0(-2.0), std::domain_error);
  CHECK(bessel_k0(800.0) == 0.0);
}

TEST_CASE("Hankel asymptotics and continuation") {
  const Complex h20 = hankel1_0(20.0);
  const Complex asym = std::sqrt(2.0 / (20.0 * pi)) * std::polar(1.0, 20.0 - pi / 4.0);
  CHECK(std::abs(std::abs(h20) / std::abs(asym) - 1.0) < 0.01);
  CHECK(std::abs(std::arg(h20 / asym)) < 0.01);

  const Complex lhs = I * pi / 2.0 * hankel1_0(3.0);
  CHECK(std::abs(lhs - oracle::k0_minus_i(3.0)) < 1e-8);
  CHECK(std::abs(hankel1_0(3.0) - Complex(-0.260051954901933437624154695977,
                                            0.376850010012790381967110192397)) < 1e-13);
}

TEST_CASE("Hankel imaginary part from the principal-value split") {
  CHECK(std::abs(hankel1_0(1.0).imag() - oracle::y0_at_one_sokhotsky()) < 1e-8);
  CHECK(bessel_y0(1.0) == doctest::Approx(0.0882569642156769579829267660235).epsilon(1e-13));
}

TEST_CASE("cylinder kernel closed-form branches") {
  auto k1 = cylinder_kernel(1.0, 2.0, 1.0);
  CHECK(k1.branch == KernelBranch::evanescent);
  CHECK(std::abs(k1.value - Complex(-bessel_k0(std::sqrt(3.0)) / two_pi, 0.0)) < 1e-16);
  auto k2 = cylinder_kernel(1.0, 1.0, 2.0);
  CHECK(k2.branch == KernelBranch::propagating);
  CHECK(std::abs(k2.value - hankel1_0(std::sqrt(3.0)) / (4.0 * I)) < 1e-16);
}

TEST_CASE("cylinder kernel depends on b^2 only") {
  for (double b : {0.0, 0.3, 0.999, 1.001, 2.5, 40.0}) {
    for (double rho : {0.1, 1.0, 7.0}) {
      const auto p = cylinder_kernel(rho, b, 1.0);
      const auto m = cylinder_kernel(rho, -b, 1.0);
      CHECK(p.value == m.value);
      CHECK(p.branch == m.branch);
    }
  }
}

TEST_CASE("cylinder kernel singular flag") {
  const auto s = cylinder_kernel(1.0, 1.0, 1.0);
  CHECK(s.singular());
  CHECK(std::isinf(s.value.real()));
  const auto near = cylinder_kernel(1.0, 1.0 + 1e-14, 1.0);
  CHECK(near.singular());
  CHECK(std::isfinite(near.value.real()));
  CHECK_FALSE(cylinder_kernel(1.0, 1.0 + 1e-6, 1.0).singular());
  CHECK_THROWS_AS(cylinder_kernel(0.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("cylinder kernel equals the direct line integral") {
  // Half-lines are integrated separately so each tail has one phase rate.
  auto line = [](double rho, double b, double omega) {
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-14;
    spec.radial_cutoff = 40.0;
    Complex total = 0.0;
    for (double sb : {b, -b}) {
      auto g = [&](double x) {
        const double r = std::hypot(x, rho);
        return std::polar(1.0, omega * r + sb * x) / (-4.0 * pi * r);
      };
      total += integrate_line_oscillatory(g, std::abs(omega + sb), spec, 0.0).value;
    }
    return total;
  };
  const Complex direct = line(2.0, 3.0, 1.0);
  CHECK(rel_err(direct, cylinder_kernel(2.0, 3.0, 1.0).value) < 1e-5);
  // \int dx e^{...}/sqrt(x^2+rho^2) = 2 K0(rho sqrt(b^2-w^2)), frozen at 30 digits.
  CHECK(std::abs(-4.0 * pi * direct - 0.00360735857473176449431245249989) < 1e-8);
  const Complex prop = line(1.0, 0.4, 1.3);
  CHECK(rel_err(prop, cylinder_kernel(1.0, 0.4, 1.3).value) < 1e-5);
}

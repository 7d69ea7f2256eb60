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

#include "tdscatter/greens.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tds {

namespace {

double checked_norm(const Vec3& r, const char* who) {
  const double n = r.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::domain_error(std::string(who) + ": |r| must be finite and > 0");
  return n;
}

}  // namespace

Complex greens_scalar(double omega, const Vec3& r) {
  const double d = checked_norm(r, "greens_scalar");
  return -std::polar(1.0, std::abs(omega) * d) / (4.0 * pi * d);
}

Tensor3C greens_tensor(double omega, const Vec3& r) {
  if (!(omega > 0.0)) throw std::domain_error("greens_tensor: omega must be > 0");
  const double d = checked_norm(r, "greens_tensor");
  const Vec3 n = r / d;
  const double wr = omega * d;
  const Complex pref = std::polar(1.0, wr) / (4.0 * pi * d * d * d * omega * omega);
  const Complex diag = 1.0 - I * wr - wr * wr;
  const Complex radial = 3.0 - 3.0 * I * wr - wr * wr;
  const Eigen::Matrix3d nn = n * n.transpose();
  return pref * (diag * Tensor3C::Identity() - radial * nn.cast<Complex>());
}

Tensor3C greens_far(double omega, const Vec3& r, const Vec3& r_src) {
  const double d = checked_norm(r, "greens_far");
  const Vec3 n = r / d;
  const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - n * n.transpose();
  const Complex phase = std::polar(1.0, omega * d - omega * n.dot(r_src));
  return (phase / d) * proj.cast<Complex>();
}

Tensor3C greens_far_normalized(double omega, const Vec3& r, const Vec3& r_src) {
  return greens_far(omega, r, r_src) * Complex(-1.0 / (4.0 * pi));
}

Tensor3C greens_near(double omega, const Vec3& r) {
  const double d = checked_norm(r, "greens_near");
  const Vec3 n = r / d;
  const Eigen::Matrix3d dip = Eigen::Matrix3d::Identity() - 3.0 * n * n.transpose();
  return (dip / (4.0 * pi * omega * omega * d * d * d)).cast<Complex>();
}

Tensor3C greens_eval(GreenForm form, double omega, const Vec3& r, const Vec3& r_src) {
  switch (form) {
    case GreenForm::exact: return greens_tensor(omega, r - r_src);
    case GreenForm::far_verbatim: return greens_far(omega, r, r_src);
    case GreenForm::far_normalized: return greens_far_normalized(omega, r, r_src);
  }
  throw std::invalid_argument("greens_eval: unknown form");
}

}  // namespace tds

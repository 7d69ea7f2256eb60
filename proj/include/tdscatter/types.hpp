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

#ifndef TDSCATTER_TYPES_HPP
#define TDSCATTER_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

/// Units throughout: c = hbar = 1. Lengths and inverse lengths are plain
/// doubles measured in units of a reference frequency chosen by the caller.
namespace tds {

using Complex = std::complex<double>;

/// Position or wavevector.
using Vec3 = Eigen::Vector3d;
/// Rank-2 complex Cartesian tensor (Green tensors, scattering amplitudes).
using Tensor3C = Eigen::Matrix3cd;
/// Amplitudes over the two transverse polarizations.
using Pol2C = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
inline constexpr Complex I{0.0, 1.0};

/// Unit vector of the motion / modulation axis.
inline Vec3 unit_x() { return Vec3::UnitX(); }

}  // namespace tds

#endif  // TDSCATTER_TYPES_HPP

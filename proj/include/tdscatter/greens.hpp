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

#ifndef TDSCATTER_GREENS_HPP
#define TDSCATTER_GREENS_HPP

#include "tdscatter/types.hpp"

// Retarded Green functions of the vector Helmholtz operator
//   {(d_s d_s + w^2) delta_ab - d_a d_b} G_bc = delta_ac delta(r)
// in free space.  The delta(r)/3 contact term is never included: all
// functions here reject r = 0.
namespace tds {

/// G_w(r) = -e^{i|w||r|} / (4 pi |r|).
Complex greens_scalar(double omega, const Vec3& r);

/// (delta_ab + d_a d_b / w^2) G_w(r) in closed form, w > 0, r != 0.
Tensor3C greens_tensor(double omega, const Vec3& r);

/// Spherical-wave limit |r| >> |r'| in its usual textbook form:
///   (delta - n n) e^{i w r - i w n.r'} / r,   n = r/|r|.
/// Note the missing -1/(4 pi) relative to greens_tensor.
Tensor3C greens_far(double omega, const Vec3& r, const Vec3& r_src);

/// greens_far with the -1/(4 pi) of G_w restored; agrees with
/// greens_tensor(w, r - r') to O(1/(w r)) and O(|r'|^2 / r).
Tensor3C greens_far_normalized(double omega, const Vec3& r, const Vec3& r_src);

/// Quasi-static limit w|r| << 1:  (delta - 3 n n) / (4 pi w^2 r^3).
Tensor3C greens_near(double omega, const Vec3& r);

/// Which Green tensor an integral over the scatterer uses.
enum class GreenForm { exact, far_verbatim, far_normalized };

/// Dispatches on `form`; detector at r, source point r_src.
Tensor3C greens_eval(GreenForm form, double omega, const Vec3& r, const Vec3& r_src);

}  // namespace tds

#endif  // TDSCATTER_GREENS_HPP

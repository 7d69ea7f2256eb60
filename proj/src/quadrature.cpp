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

#include "tdscatter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tdscatter/parallel.hpp"

namespace tds {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw std::invalid_argument("rel_tol must be > 0");
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw std::invalid_argument("abs_tol must be > 0");
  if (max_evals < 1000) throw std::invalid_argument("max_evals must be >= 1000");
  if (!(radial_cutoff > 0.0) || !std::isfinite(radial_cutoff))
    throw std::invalid_argument("radial_cutoff must be finite and > 0");
  if (!(singular_exclusion > 0.0) || !(singular_exclusion < radial_cutoff))
    throw std::invalid_argument("singular_exclusion must lie in (0, radial_cutoff)");
  if (theta_order < 2 || phi_order < 2) throw std::invalid_argument("angular orders must be >= 2");
  if (max_theta_order < theta_order)
    throw std::invalid_argument("max_theta_order must be >= theta_order");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::string_view to_string(QuadStatus status) {
  switch (status) {
    case QuadStatus::converged: return "converged";
    case QuadStatus::tolerance_not_met: return "tolerance_not_met";
    case QuadStatus::max_evals_exceeded: return "max_evals_exceeded";
  }
  return "unknown";
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex cache_mutex;
  static std::map<int, GaussRule> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(n, rule);
  return rule;
}

namespace {

double magnitude(double x) { return std::abs(x); }
double magnitude(const Complex& z) { return std::abs(z); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk15(const F& f, double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& xk = gauss_kronrod<double, 15>::abscissa();
  const auto& wk = gauss_kronrod<double, 15>::weights();
  const auto& wg = gauss<double, 7>::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * wk[0];
  T gaus = fc * wg[0];
  for (std::size_t j = 1; j < xk.size(); ++j) {
    const double dx = h * xk[j];
    const T s = f(c - dx) + f(c + dx);
    kron += s * wk[j];
    if (j % 2 == 0) gaus += s * wg[j / 2];
  }
  kron *= h;
  gaus *= h;
  return {a, b, kron, magnitude(kron - gaus)};
}

template <class T, class F>
IntegralEstimate<T> adaptive_impl(const F& f, double a, double b, double rel_tol, double abs_tol,
                                  std::size_t max_evals, int initial_panels) {
  IntegralEstimate<T> out;
  if (!(b > a)) return out;
  if (initial_panels < 1) initial_panels = 1;
  std::priority_queue<Panel<T>> heap;
  std::vector<Panel<T>> done;
  T total{};
  double err = 0.0;
  const double h = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * h;
    Panel<T> p = gk15<T>(f, lo, hi);
    out.evals += 15;
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  auto target = [&] { return std::max(abs_tol, rel_tol * magnitude(total)); };
  // Incremental sums drift; rebuild them from the panel list now and then.
  auto resum = [&] {
    total = T{};
    err = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      total += copy.top().value;
      err += copy.top().error;
      copy.pop();
    }
    for (const auto& p : done) {
      total += p.value;
      err += p.error;
    }
  };
  std::size_t splits = 0;
  while (err > target()) {
    if (out.evals + 30 > max_evals) {
      out.status = QuadStatus::max_evals_exceeded;
      break;
    }
    Panel<T> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a) || !(mid < worst.b)) {
      // Panel cannot be split further in double precision.
      heap.pop();
      done.push_back(worst);
      if (heap.empty()) {
        out.status = QuadStatus::tolerance_not_met;
        break;
      }
      continue;
    }
    heap.pop();
    Panel<T> left = gk15<T>(f, worst.a, mid);
    Panel<T> right = gk15<T>(f, mid, worst.b);
    out.evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (++splits % 256 == 0) resum();
  }
  resum();
  out.value = total;
  out.error_estimate = err;
  if (out.status == QuadStatus::converged && err > target()) out.status = QuadStatus::tolerance_not_met;
  return out;
}

}  // namespace

IntegralEstimate<double> integrate_adaptive(const std::function<double(double)>& f, double a,
                                            double b, double rel_tol, double abs_tol,
                                            std::size_t max_evals, int initial_panels) {
  return adaptive_impl<double>(f, a, b, rel_tol, abs_tol, max_evals, initial_panels);
}

IntegralEstimate<Complex> integrate_adaptive_complex(const std::function<Complex(double)>& f,
                                                     double a, double b, double rel_tol, double abs_tol,
                                             std::size_t max_evals, int initial_panels) {
  return adaptive_impl<Complex>(f, a, b, rel_tol, abs_tol, max_evals, initial_panels);
}

Vec3 direction_about(Axis polar, double cos_theta, double phi) {
  const int a = static_cast<int>(polar);
  const double st = std::sqrt(std::max(0.0, (1.0 - cos_theta) * (1.0 + cos_theta)));
  Vec3 v;
  v[a] = cos_theta;
  v[(a + 1) % 3] = st * std::cos(phi);
  v[(a + 2) % 3] = st * std::sin(phi);
  return v;
}

namespace {

struct DirectionResult {
  double value = 0.0;
  double error = 0.0;
  double exclusion = 0.0;
  std::size_t evals = 0;
  bool budget_hit = false;
};

constexpr int kRadialPanels = 16;

DirectionResult radial_integral(const Integrand3& f, const Vec3& dir, const QuadratureSpec& spec,
                                const SingularRadii& singular, std::size_t budget) {
  DirectionResult out;
  const double cutoff = spec.radial_cutoff;
  const double eps = spec.singular_exclusion;
  auto g = [&](double q) { return q * q * f(q * dir); };

  std::vector<double> cuts;
  if (singular) {
    for (double s : singular(dir))
      if (s > 0.0 && s < cutoff && std::isfinite(s)) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
  }
  std::vector<std::pair<double, double>> pieces;
  double lo = 0.0;
  for (double s : cuts) {
    const double hi = std::max(lo, s - eps);
    if (hi > lo) pieces.emplace_back(lo, hi);
    // |excluded| <= 2 eps max|q^2 f| near a log singularity, with margin.
    const double edge = std::max(std::abs(g(std::max(0.0, s - eps))), std::abs(g(s + eps)));
    out.exclusion += 4.0 * eps * edge;
    out.evals += 2;
    lo = std::max(lo, s + eps);
  }
  if (cutoff > lo) pieces.emplace_back(lo, cutoff);

  const double abs_target = spec.abs_tol / (4.0 * pi);
  for (const auto& [a, b] : pieces) {
    const int panels = std::max(1, static_cast<int>(std::ceil(kRadialPanels * (b - a) / cutoff)));
    const std::size_t left = budget > out.evals ? budget - out.evals : 0;
    auto r = adaptive_impl<double>(g, a, b, spec.rel_tol, abs_target / pieces.size(),
                                   std::max<std::size_t>(left, 15 * panels + 30), panels);
    out.value += r.value;
    out.error += r.error_estimate;
    out.evals += r.evals;
    if (r.status == QuadStatus::max_evals_exceeded) out.budget_hit = true;
  }
  return out;
}

struct AngularLevel {
  double value = 0.0;
  double radial_error = 0.0;
  double exclusion = 0.0;
  std::size_t evals = 0;
  bool budget_hit = false;
};

AngularLevel angular_level(const Integrand3& f, const QuadratureSpec& spec, int n_theta, int n_phi,
                           const SingularRadii& singular, std::size_t budget) {
  const GaussRule rule = gauss_legendre(n_theta);
  const std::size_t ndir = static_cast<std::size_t>(n_theta) * n_phi;
  const std::size_t per_dir = std::max<std::size_t>(budget / ndir, 2000);
  std::vector<DirectionResult> results(ndir);
  parallel_for(ndir, spec.threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / n_phi);
    const int j = static_cast<int>(idx % n_phi);
    const double phi = two_pi * (j + 0.5) / n_phi;
    results[idx] = radial_integral(f, direction_about(spec.polar_axis, rule.nodes[i], phi), spec,
                                   singular, per_dir);
  });
  AngularLevel out;
  const double wphi = two_pi / n_phi;
  for (std::size_t idx = 0; idx < ndir; ++idx) {
    const double w = rule.weights[idx / n_phi] * wphi;
    out.value += w * results[idx].value;
    out.radial_error += w * results[idx].error;
    out.exclusion += w * results[idx].exclusion;
    out.evals += results[idx].evals;
    out.budget_hit = out.budget_hit || results[idx].budget_hit;
  }
  return out;
}

}  // namespace

IntegralEstimate<double> integrate_q3(const Integrand3& f, const QuadratureSpec& spec,
                                      double tail_bound, const SingularRadii& singular) {
  spec.validate();
  IntegralEstimate<double> out;
  int n_theta = spec.theta_order;
  int n_phi = spec.phi_order;
  AngularLevel coarse =
      angular_level(f, spec, std::max(2, n_theta / 2), std::max(2, n_phi / 2), singular, spec.max_evals);
  std::size_t evals = coarse.evals;
  AngularLevel fine;
  double angular_error = 0.0;
  for (;;) {
    const std::size_t left = spec.max_evals > evals ? spec.max_evals - evals : 0;
    fine = angular_level(f, spec, n_theta, n_phi, singular, left);
    evals += fine.evals;
    angular_error = std::abs(fine.value - coarse.value);
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(fine.value));
    if (angular_error + fine.radial_error <= target) break;
    if (2 * n_theta > spec.max_theta_order || evals >= spec.max_evals || fine.budget_hit) break;
    coarse = fine;
    n_theta *= 2;
    n_phi *= 2;
  }
  out.value = fine.value;
  out.evals = evals;
  out.truncation_bound = std::abs(tail_bound) + fine.exclusion;
  out.error_estimate = fine.radial_error + angular_error + out.truncation_bound;
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  if (fine.budget_hit || evals >= spec.max_evals)
    out.status = QuadStatus::max_evals_exceeded;
  else if (out.error_estimate > target)
    out.status = QuadStatus::tolerance_not_met;
  return out;
}

IntegralEstimate<double> monte_carlo_q3(const Integrand3& f, std::size_t n_samples,
                                        std::uint64_t seed, double scale) {
  if (n_samples < 2) throw std::invalid_argument("monte_carlo_q3: need at least 2 samples");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("monte_carlo_q3: scale must be finite and > 0");
  constexpr std::size_t kBlock = 1 << 16;
  const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
  const double norm = 8.0 * pi * scale * scale * scale;
  long double sum = 0.0L, sum_sq = 0.0L;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32)};
    std::mt19937_64 rng(seq);
    auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const std::size_t count = std::min(kBlock, n_samples - blk * kBlock);
    long double bsum = 0.0L, bsq = 0.0L;
    for (std::size_t s = 0; s < count; ++s) {
      const double r = -scale * std::log((1.0 - u01()) * (1.0 - u01()) * (1.0 - u01()));
      const double z = 2.0 * u01() - 1.0;
      const double phi = two_pi * u01();
      const Vec3 q = r * direction_about(Axis::z, z, phi);
      const double weight = f(q) * norm * std::exp(r / scale);
      bsum += weight;
      bsq += static_cast<long double>(weight) * weight;
    }
    sum += bsum;
    sum_sq += bsq;
  }
  const long double n = static_cast<long double>(n_samples);
  const long double mean = sum / n;
  const long double var = std::max<long double>(0.0L, (sum_sq / n - mean * mean) * n / (n - 1));
  IntegralEstimate<double> out;
  out.value = static_cast<double>(mean);
  out.error_estimate = static_cast<double>(std::sqrt(var / n));
  out.evals = n_samples;
  return out;
}

std::pair<Complex, double> wynn_epsilon(const std::vector<Complex>& s) {
  const std::size_t n = s.size();
  if (n == 0) return {Complex{}, 0.0};
  if (n < 3) return {s.back(), n == 2 ? std::abs(s[1] - s[0]) : std::abs(s[0])};
  // prev = column k-1, cur = column k; entry j of a column pairs with s[j...].
  std::vector<Complex> prev(n + 1, Complex{});
  std::vector<Complex> cur(s.begin(), s.end());
  Complex best = s.back();
  double best_err = std::abs(s[n - 1] - s[n - 2]);
  Complex last_even = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Complex> next(n - k);
    bool ok = true;
    for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
      const Complex d = cur[j + 1] - cur[j];
      if (std::abs(d) <= 1e-300 || !std::isfinite(std::abs(d))) {
        ok = false;
        break;
      }
      next[j] = prev[j + 1] + 1.0 / d;
    }
    if (!ok) break;
    if (k % 2 == 0) {
      const Complex est = next.back();
      if (!std::isfinite(est.real()) || !std::isfinite(est.imag())) break;
      double err = std::abs(est - last_even);
      if (next.size() >= 2) err = std::max(err, std::abs(next[next.size() - 1] - next[next.size() - 2]));
      if (err < best_err) {
        best = est;
        best_err = err;
      }
      last_even = est;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (cur.size() < 2) break;
  }
  return {best, best_err};
}

namespace {

struct TailResult {
  Complex value{};
  double error = 0.0;
  double truncation = 0.0;
  std::size_t evals = 0;
  bool budget_hit = false;
};

// \int_start^{start + dir * inf} g(x) dx, dir = +1 or -1.
TailResult integrate_tail(const std::function<Complex(double)>& g, double start, int dir,
                          double rate, const QuadratureSpec& spec, double scale_hint,
                          std::size_t budget) {
  TailResult out;
  const double panel_tol = spec.rel_tol * 1e-2;
  auto piece = [&](double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    auto r = integrate_adaptive_complex(g, lo, hi, panel_tol, spec.abs_tol * 1e-3, budget / 64 + 1000, 1);
    out.evals += r.evals;
    out.error += r.error_estimate;
    if (r.status == QuadStatus::max_evals_exceeded) out.budget_hit = true;
    return r.value;
  };
  if (rate > 0.0) {
    const double h = pi / rate;
    std::vector<Complex> partial;
    Complex running{};
    double prev_err = std::numeric_limits<double>::infinity();
    Complex estimate{};
    double est_err = std::numeric_limits<double>::infinity();
    int quiet = 0;
    for (int k = 0; k < 600; ++k) {
      const double a = start + dir * k * h;
      const Complex p = piece(a, a + dir * h);
      running += p;
      partial.push_back(running);
      if (out.evals > budget) {
        out.budget_hit = true;
        break;
      }
      if (std::abs(p) == 0.0) {
        if (++quiet >= 3) {
          estimate = running;
          est_err = 0.0;
          break;
        }
        continue;
      }
      quiet = 0;
      if (partial.size() < 6) continue;
      // Refit on a bounded window of recent partial sums.
      const std::size_t w = std::min<std::size_t>(partial.size(), 40);
      std::vector<Complex> window(partial.end() - w, partial.end());
      auto [lim, err] = wynn_epsilon(window);
      const double target = std::max(spec.abs_tol, spec.rel_tol * std::max(std::abs(lim), scale_hint)) * 0.05;
      estimate = lim;
      est_err = err;
      if (err <= target && prev_err <= target) break;
      prev_err = err;
    }
    out.value = estimate;
    out.truncation = std::isfinite(est_err) ? est_err : std::abs(running);
    if (!std::isfinite(est_err)) out.value = running;
    return out;
  }
  // Non-oscillatory tail: doubling panels, stop once a panel is negligible.
  double len = std::max(std::abs(start), 1.0);
  double a = start;
  Complex running{};
  double last = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Complex p = piece(a, a + dir * len);
    running += p;
    last = std::abs(p);
    a += dir * len;
    len *= 2.0;
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::max(std::abs(running), scale_hint)) * 0.05;
    if (last <= target && k >= 2) break;
    if (out.evals > budget) {
      out.budget_hit = true;
      break;
    }
  }
  out.value = running;
  out.truncation = last;
  return out;
}

}  // namespace

IntegralEstimate<Complex> integrate_line_oscillatory(const std::function<Complex(double)>& g,
                                                     double phase_rate,
                                                     const QuadratureSpec& spec, double lo,
                                                     double hi) {
  spec.validate();
  if (!(phase_rate >= 0.0) || !std::isfinite(phase_rate))
    throw std::invalid_argument("phase_rate must be finite and >= 0");
  if (std::isnan(lo) || std::isnan(hi) || !(hi > lo))
    throw std::invalid_argument("integrate_line_oscillatory: need lo < hi");
  const double L = spec.radial_cutoff;
  const bool left_inf = std::isinf(lo);
  const bool right_inf = std::isinf(hi);
  double core_lo = left_inf ? -L : lo;
  double core_hi = right_inf ? L : hi;
  if (right_inf) core_hi = std::max(core_hi, core_lo);
  if (left_inf) core_lo = std::min(core_lo, core_hi);

  IntegralEstimate<Complex> out;
  if (core_hi > core_lo) {
    int panels = 1;
    if (phase_rate > 0.0) {
      const double width = pi / (4.0 * phase_rate);
      panels = static_cast<int>(std::min(2.0e5, std::ceil((core_hi - core_lo) / width)));
    }
    panels = std::max(panels, 8);
    auto core = integrate_adaptive_complex(g, core_lo, core_hi, spec.rel_tol * 0.5, spec.abs_tol * 0.5,
                                   spec.max_evals, panels);
    out.value = core.value;
    out.error_estimate = core.error_estimate;
    out.evals = core.evals;
    if (core.status == QuadStatus::max_evals_exceeded) out.status = QuadStatus::max_evals_exceeded;
  }
  const double scale_hint = std::abs(out.value);
  auto add_tail = [&](double start, int dir) {
    const std::size_t left = spec.max_evals > out.evals ? spec.max_evals - out.evals : 1000;
    const TailResult t = integrate_tail(g, start, dir, phase_rate, spec, scale_hint, left);
    out.value += t.value;
    out.error_estimate += t.error + t.truncation;
    out.truncation_bound += t.truncation;
    out.evals += t.evals;
    if (t.budget_hit) out.status = QuadStatus::max_evals_exceeded;
  };
  if (right_inf) add_tail(core_hi, +1);
  if (left_inf) add_tail(core_lo, -1);
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  if (out.status == QuadStatus::converged && out.error_estimate > target)
    out.status = QuadStatus::tolerance_not_met;
  return out;
}

}  // namespace tds

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

#include "tdscatter/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tdscatter/parallel.hpp"

namespace tds::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(ScenarioKind k) {
  return k == ScenarioKind::modulated ? "modulated" : "moving_rod";
}

std::string_view to_string(SourceKind k) {
  switch (k) {
    case SourceKind::vacuum: return "vacuum";
    case SourceKind::one_photon: return "one_photon";
    case SourceKind::coherent: return "coherent";
  }
  return "unknown";
}

namespace {

// ---------------------------------------------------------------------------
// JSON access with field paths.

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      throw ConfigError(join(path, it.key()), "unknown field");
  }
}

const json& need(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double number(const json& obj, const std::string& path, const char* key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "missing");
  }
  return as_number(obj.at(key), join(path, key));
}

std::string text(const json& obj, const std::string& path, const char* key,
                 std::optional<std::string> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "missing");
  }
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

Complex as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {as_number(v, path), 0.0};
  if (v.is_array() && v.size() == 2) return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
  throw ConfigError(path, "expected a number or [re, im]");
}

Vec3 as_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected [x, y, z]");
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"), as_number(v[2], path + "[2]")};
}

// A grid is a number, a list of numbers, {"linear": [a, b, n]} or {"log": [a, b, n]}.
std::vector<double> grid(const json& v, const std::string& path) {
  if (v.is_number()) return {as_number(v, path)};
  if (v.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    if (out.empty()) throw ConfigError(path, "grid must not be empty");
    return out;
  }
  if (v.is_object() && v.size() == 1 && (v.contains("linear") || v.contains("log"))) {
    const bool log = v.contains("log");
    const std::string p = join(path, log ? "log" : "linear");
    const json& a = v.at(log ? "log" : "linear");
    if (!a.is_array() || a.size() != 3 || !a[2].is_number_integer())
      throw ConfigError(p, "expected [from, to, count]");
    const double lo = as_number(a[0], p + "[0]"), hi = as_number(a[1], p + "[1]");
    const long count = a[2].get<long>();
    if (count < 1) throw ConfigError(p + "[2]", "count must be >= 1");
    if (log && !(lo > 0.0 && hi > 0.0)) throw ConfigError(p, "log grid needs positive bounds");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out[i] = log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    return out;
  }
  throw ConfigError(path, "expected a number, a list or {\"linear\"|\"log\": [from, to, count]}");
}

std::vector<double> positive_grid(const json& obj, const std::string& path, const char* key) {
  std::vector<double> g = grid(need(obj, path, key), join(path, key));
  for (double x : g)
    if (!(x > 0.0)) throw ConfigError(join(path, key), "values must be > 0");
  return g;
}

Profile1D profile(const json& v, const std::string& path) {
  allow_keys(v, path, {"kind", "amplitude", "width", "center"});
  Profile1D p;
  try {
    p.kind = profile_kind_from_string(text(v, path, "kind", "gaussian"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(path, "kind"), e.what());
  }
  p.amplitude = number(v, path, "amplitude");
  p.width = number(v, path, "width");
  p.center = number(v, path, "center", 0.0);
  if (!(p.width > 0.0)) throw ConfigError(join(path, "width"), "must be > 0");
  return p;
}

template <class T>
T choice(const json& obj, const std::string& path, const char* key, const std::string& fallback,
         std::initializer_list<std::pair<const char*, T>> options) {
  const std::string name = text(obj, path, key, fallback);
  for (const auto& [label, value] : options)
    if (name == label) return value;
  throw ConfigError(join(path, key), "unknown value '" + name + "'");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
}

json effective(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json j = parse_json(text);
  if (seed_override && j.is_object()) j["seed"] = *seed_override;
  return j;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* const kHeader[] = {
    "point",        "scenario",     "source",        "omega",          "k",
    "r",            "nx",           "ny",            "nz",             "rho",
    "axial",        "value",        "error",         "vacuum",         "photon_plus",
    "photon_minus", "cross",        "evals",         "status",         "tolerance_met",
    "regime_plus",  "regime_minus", "probe_plus",    "probe_minus",    "enhancement_plus",
    "enhancement_minus", "config_hash"};
constexpr std::size_t kColumns = sizeof(kHeader) / sizeof(kHeader[0]);

std::string header_line() {
  std::string s;
  for (std::size_t i = 0; i < kColumns; ++i) {
    if (i) s += ',';
    s += kHeader[i];
  }
  return s;
}

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  out.close();
  return static_cast<bool>(out);
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration.

ScenarioConfig parse_config(const std::string& json_text, std::optional<std::uint64_t> seed_override) {
  const json root = effective(json_text, seed_override);
  allow_keys(root, "", {"schema", "omega_ref", "scenario", "dielectric", "detector", "source", "quadrature", "seed"});
  if (text(root, "", "schema") != kSchema)
    throw ConfigError("schema", "expected '" + std::string(kSchema) + "'");

  ScenarioConfig c;
  c.omega_ref = number(root, "", "omega_ref");
  if (!(c.omega_ref > 0.0)) throw ConfigError("omega_ref", "must be > 0");
  c.scenario = choice<ScenarioKind>(root, "", "scenario", "",
                                    {{"modulated", ScenarioKind::modulated}, {"moving_rod", ScenarioKind::moving_rod}});
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }

  const json& diel = need(root, "", "dielectric");
  const json& det = need(root, "", "detector");
  if (c.scenario == ScenarioKind::modulated) {
    allow_keys(diel, "dielectric", {"chi", "eta", "w", "green"});
    const json& chi = need(diel, "dielectric", "chi");
    if (!chi.is_array() || chi.size() != 3) throw ConfigError("dielectric.chi", "expected three profiles");
    for (int a = 0; a < 3; ++a)
      c.modulated.chi.factors[a] = profile(chi[a], "dielectric.chi[" + std::to_string(a) + "]");
    c.modulated.eta = profile(need(diel, "dielectric", "eta"), "dielectric.eta");
    c.modulated.w = number(diel, "dielectric", "w");
    if (!(c.modulated.w > 0.0)) throw ConfigError("dielectric.w", "must be > 0");
    c.normalized_green = choice<bool>(diel, "dielectric", "green", "normalized",
                                      {{"normalized", true}, {"verbatim", false}});

    allow_keys(det, "detector", {"omega", "r", "n"});
    c.omega = positive_grid(det, "detector", "omega");
    c.r = positive_grid(det, "detector", "r");
    const json& nj = need(det, "detector", "n");
    if (!nj.is_array() || nj.empty()) throw ConfigError("detector.n", "expected a list of directions");
    const bool single = nj.size() == 3 && nj[0].is_number();
    for (std::size_t i = 0; i < (single ? 1 : nj.size()); ++i) {
      const std::string p = single ? "detector.n" : "detector.n[" + std::to_string(i) + "]";
      const Vec3 n = as_vec3(single ? nj : nj[i], p);
      if (!(n.norm() > 0.0)) throw ConfigError(p, "direction must be nonzero");
      c.n.push_back(n.normalized());
    }
  } else {
    allow_keys(diel, "dielectric", {"profile", "pointlike", "v", "form", "kinematics", "tensor_sign"});
    const double v = number(diel, "dielectric", "v");
    if (!(std::abs(v) < 1.0) || v == 0.0) throw ConfigError("dielectric.v", "need 0 < |v| < 1");
    if (diel.contains("profile") == diel.contains("pointlike"))
      throw ConfigError("dielectric.profile", "give exactly one of 'profile' and 'pointlike'");
    if (diel.contains("profile")) {
      c.rod = make_rod(profile(diel.at("profile"), "dielectric.profile"), v);
    } else {
      const json& pl = diel.at("pointlike");
      allow_keys(pl, "dielectric.pointlike", {"strength"});
      c.rod = make_point_rod(v, number(pl, "dielectric.pointlike", "strength", 1.0));
    }
    c.rod_form = choice<RodForm>(diel, "dielectric", "form", "covariant",
                                 {{"covariant", RodForm::covariant}, {"tensor", RodForm::tensor}});
    c.kinematics = choice<CovariantKinematics>(
        diel, "dielectric", "kinematics", "direct",
        {{"direct", CovariantKinematics::direct}, {"polarization_sum", CovariantKinematics::polarization_sum}});
    c.tensor_sign = choice<RodTensorSign>(
        diel, "dielectric", "tensor_sign", "green_consistent",
        {{"green_consistent", RodTensorSign::green_consistent}, {"opposite", RodTensorSign::opposite}});

    allow_keys(det, "detector", {"omega", "rho", "axial"});
    c.omega = positive_grid(det, "detector", "omega");
    c.rho = positive_grid(det, "detector", "rho");
    c.axial = det.contains("axial") ? grid(det.at("axial"), "detector.axial") : std::vector<double>{0.0};
  }

  if (root.contains("source")) {
    const json& src = root.at("source");
    allow_keys(src, "source", {"kind", "k", "polarization", "envelope_norm", "amplitude"});
    c.source.kind = choice<SourceKind>(src, "source", "kind", "vacuum",
                                       {{"vacuum", SourceKind::vacuum},
                                        {"one_photon", SourceKind::one_photon},
                                        {"coherent", SourceKind::coherent}});
    if (c.source.kind != SourceKind::vacuum) {
      c.source.k = as_vec3(need(src, "source", "k"), "source.k");
      if (!(c.source.k.norm() > 0.0)) throw ConfigError("source.k", "must be nonzero");
      if (src.contains("polarization")) {
        const json& pj = src.at("polarization");
        if (!pj.is_array() || pj.size() != 2) throw ConfigError("source.polarization", "expected [c1, c2]");
        c.source.polarization = Pol2C(as_complex(pj[0], "source.polarization[0]"),
                                      as_complex(pj[1], "source.polarization[1]"));
        if (!(c.source.polarization.norm() > 0.0)) throw ConfigError("source.polarization", "must be nonzero");
        c.source.polarization.normalize();
      }
      if (c.source.kind == SourceKind::one_photon) {
        c.source.envelope_norm = number(src, "source", "envelope_norm", 1.0);
        if (!(c.source.envelope_norm >= 0.0)) throw ConfigError("source.envelope_norm", "must be >= 0");
      } else {
        c.source.amplitude = as_complex(need(src, "source", "amplitude"), "source.amplitude");
      }
    }
    if (c.scenario == ScenarioKind::moving_rod && c.rod_form == RodForm::tensor &&
        c.source.kind != SourceKind::vacuum)
      throw ConfigError("dielectric.form", "photon sources need the covariant form");
  }

  if (root.contains("quadrature")) {
    const json& q = root.at("quadrature");
    allow_keys(q, "quadrature", {"method", "rel_tol", "abs_tol", "max_evals", "theta_order", "phi_order",
                                 "max_theta_order", "samples", "guard_band"});
    c.method = choice<Method>(q, "quadrature", "method", "adaptive",
                              {{"adaptive", Method::adaptive}, {"monte_carlo", Method::monte_carlo}});
    QuadratureSpec& s = c.quadrature;
    s.rel_tol = number(q, "quadrature", "rel_tol", s.rel_tol);
    s.abs_tol = number(q, "quadrature", "abs_tol", s.abs_tol);
    s.max_evals = static_cast<std::size_t>(number(q, "quadrature", "max_evals", static_cast<double>(s.max_evals)));
    s.theta_order = static_cast<int>(number(q, "quadrature", "theta_order", s.theta_order));
    s.phi_order = static_cast<int>(number(q, "quadrature", "phi_order", s.phi_order));
    s.max_theta_order = static_cast<int>(number(q, "quadrature", "max_theta_order", s.max_theta_order));
    const double samples = number(q, "quadrature", "samples", static_cast<double>(c.mc_samples));
    if (!(samples >= 1.0)) throw ConfigError("quadrature.samples", "must be >= 1");
    c.mc_samples = static_cast<std::size_t>(samples);
    c.guard = number(q, "quadrature", "guard_band", c.guard);
    if (!(c.guard >= 0.0)) throw ConfigError("quadrature.guard_band", "must be >= 0");
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("quadrature", e.what());
    }
  }
  if (c.method == Method::monte_carlo) {
    if (!c.seed) throw ConfigError("seed", "required when quadrature.method is monte_carlo");
    if (c.source.kind != SourceKind::vacuum)
      throw ConfigError("quadrature.method", "monte_carlo supports the vacuum source only");
  }
  return c;
}

std::string config_hash(const std::string& json_text, std::optional<std::uint64_t> seed_override) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(effective(json_text, seed_override).dump()));
  return buf;
}

std::vector<SweepPoint> expand_sweep(const ScenarioConfig& c) {
  std::vector<SweepPoint> out;
  for (double w : c.omega) {
    if (c.scenario == ScenarioKind::modulated) {
      for (double r : c.r)
        for (const Vec3& n : c.n) out.push_back({out.size(), Detector::cartesian(w, r * n)});
    } else {
      for (double rho : c.rho)
        for (double ax : c.axial) out.push_back({out.size(), Detector::cylindrical(w, rho, ax)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

IntensityResult monte_carlo(const Q3Problem& p, const ScenarioConfig& c, std::size_t index) {
  const IntegralEstimate<double> e = solve_monte_carlo(p, c.mc_samples, splitmix64(*c.seed ^ splitmix64(index)));
  IntensityResult r;
  r.value = e.value;
  r.error_estimate = e.error_estimate;
  r.evals = e.evals;
  r.parts.vacuum = e.value;
  r.status = e.status;
  return r;
}

PointResult evaluate_point(const ScenarioConfig& c, const SweepPoint& pt, int threads) {
  QuadratureSpec spec = c.quadrature;
  spec.threads = threads;
  const Detector& det = pt.detector;
  PointResult out{pt, {}, std::nullopt};
  const bool mc = c.method == Method::monte_carlo;

  IncidentPhoton photon;
  photon.k = c.source.k;
  photon.c = c.source.polarization;
  photon.envelope_norm = c.source.envelope_norm;
  CoherentState cs;
  cs.amplitude = c.source.amplitude;
  cs.k = c.source.k;
  cs.c = c.source.polarization;

  if (c.scenario == ScenarioKind::modulated) {
    const ModulatedDielectric& d = c.modulated;
    switch (c.source.kind) {
      case SourceKind::vacuum:
        out.result = mc ? monte_carlo(vacuum_modulated_problem(d, det, c.normalized_green), c, pt.index)
                        : vacuum_modulated(d, det, spec, c.normalized_green);
        break;
      case SourceKind::one_photon:
        out.result = photon_modulated(d, det, photon, spec, c.normalized_green, c.guard);
        break;
      case SourceKind::coherent:
        out.result = coherent_modulated(d, det, cs, spec, c.normalized_green, c.guard);
        break;
    }
    if (c.source.kind != SourceKind::vacuum)
      out.resolution = rayleigh_report_modulated(d.w, det.omega, c.source.k.norm());
  } else {
    const MovingRod& m = c.rod;
    switch (c.source.kind) {
      case SourceKind::vacuum:
        if (c.rod_form == RodForm::covariant)
          out.result = mc ? monte_carlo(vacuum_rod_covariant_problem(m, det, c.kinematics), c, pt.index)
                          : vacuum_rod_covariant(m, det, spec, c.kinematics);
        else
          out.result = mc ? monte_carlo(vacuum_rod_tensor_problem(m, det, c.tensor_sign), c, pt.index)
                          : vacuum_rod_tensor(m, det, spec, c.tensor_sign);
        break;
      case SourceKind::one_photon:
        out.result = photon_rod(m, det, photon, spec, c.kinematics);
        break;
      case SourceKind::coherent:
        out.result = coherent_rod(m, det, cs, spec, c.kinematics);
        break;
    }
    if (c.source.kind != SourceKind::vacuum) out.resolution = rayleigh_report_rod(m, det.omega, c.source.k);
  }
  return out;
}

}  // namespace

std::vector<PointResult> evaluate(const ScenarioConfig& c, int threads) {
  const std::vector<SweepPoint> points = expand_sweep(c);
  std::vector<PointResult> out(points.size());
  const int outer = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  const int inner = std::max(1, threads / outer);
  parallel_for(points.size(), outer, [&](std::size_t i) {
    try {
      out[i] = evaluate_point(c, points[i], inner);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("detector", "sweep point " + std::to_string(i) + ": " + e.what());
    } catch (const std::domain_error& e) {
      throw ConfigError("detector", "sweep point " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

std::string results_csv(const ScenarioConfig& c, const std::vector<PointResult>& rows, const std::string& hash) {
  std::string s = header_line() + "\n";
  const bool mod = c.scenario == ScenarioKind::modulated;
  const bool has_k = c.source.kind != SourceKind::vacuum;
  for (const PointResult& p : rows) {
    const Detector& d = p.point.detector;
    const IntensityResult& r = p.result;
    std::vector<std::string> f;
    f.reserve(kColumns);
    f.push_back(std::to_string(p.point.index));
    f.emplace_back(to_string(c.scenario));
    f.emplace_back(to_string(c.source.kind));
    f.push_back(fmt(d.omega));
    f.push_back(has_k ? fmt(c.source.k.norm()) : "");
    if (mod) {
      const Vec3 n = d.n();
      f.push_back(fmt(d.r.norm()));
      f.push_back(fmt(n.x()));
      f.push_back(fmt(n.y()));
      f.push_back(fmt(n.z()));
      f.emplace_back("");
      f.emplace_back("");
    } else {
      for (int i = 0; i < 4; ++i) f.emplace_back("");
      f.push_back(fmt(d.rho));
      f.push_back(fmt(d.axial));
    }
    f.push_back(fmt(r.value));
    f.push_back(fmt(r.error_estimate));
    f.push_back(fmt(r.parts.vacuum));
    f.push_back(fmt(r.parts.photon_plus));
    f.push_back(fmt(r.parts.photon_minus));
    f.push_back(fmt(r.parts.cross));
    f.push_back(std::to_string(r.evals));
    f.emplace_back(to_string(r.status));
    f.emplace_back(r.tolerance_met() ? "true" : "false");
    if (p.resolution) {
      const ResolutionReport& rr = *p.resolution;
      f.emplace_back(to_string(rr.plus().regime));
      f.emplace_back(to_string(rr.minus().regime));
      f.push_back(fmt(rr.plus().argument));
      f.push_back(fmt(rr.minus().argument));
      f.push_back(fmt(rr.plus().enhancement));
      f.push_back(fmt(rr.minus().enhancement));
    } else {
      for (int i = 0; i < 6; ++i) f.emplace_back("");
    }
    f.push_back(hash);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) s += ',';
      s += f[i];
    }
    s += '\n';
  }
  return s;
}

int run(const std::string& config_path, const std::string& out_dir, const RunOptions& opts, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::optional<std::string> text = read_file(config_path);
  if (!text) {
    log << "error: cannot read config '" << config_path << "'\n";
    return kExitIo;
  }
  if (opts.threads < 1) {
    log << "error: --threads must be >= 1\n";
    return kExitInvalid;
  }
  ScenarioConfig cfg;
  std::string hash;
  std::vector<PointResult> rows;
  try {
    cfg = parse_config(*text, opts.seed);
    hash = config_hash(*text, opts.seed);
    rows = evaluate(cfg, opts.threads);
  } catch (const ConfigError& e) {
    log << "error: invalid config: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: evaluation failed: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    log << "error: cannot create '" << out_dir << "': " << ec.message() << "\n";
    return kExitIo;
  }

  std::size_t unmet = 0, evals = 0;
  json records = json::array();
  for (const PointResult& p : rows) {
    if (!p.result.tolerance_met()) ++unmet;
    evals += p.result.evals;
    records.push_back({{"point", p.point.index},
                       {"value", p.result.value},
                       {"error", p.result.error_estimate},
                       {"evals", p.result.evals},
                       {"status", to_string(p.result.status)}});
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::ordered_json manifest;
  manifest["config_hash"] = hash;
  manifest["library_version"] = kVersion;
  manifest["config_path"] = config_path;
  manifest["results"] = "results.csv";
  manifest["omega_ref"] = cfg.omega_ref;
  manifest["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  manifest["threads"] = opts.threads;
  manifest["points"] = rows.size();
  manifest["tolerance_unmet"] = unmet;
  manifest["evals_total"] = evals;
  manifest["wall_clock_seconds"] = wall;
  manifest["records"] = records;

  if (!write_file(fs::path(out_dir) / "results.csv", results_csv(cfg, rows, hash)) ||
      !write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n")) {
    log << "error: cannot write results to '" << out_dir << "'\n";
    return kExitIo;
  }
  log << rows.size() << " points, config " << hash << ", " << evals << " evaluations\n";
  if (unmet) {
    log << "warning: " << unmet << " point(s) missed the quadrature tolerance\n";
    return kExitTolerance;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Report.

namespace {

struct Row {
  std::map<std::string, std::string> f;
  const std::string& operator[](const std::string& k) const { return f.at(k); }
  double num(const std::string& k) const {
    const std::string& s = f.at(k);
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error("column " + k + ": not a number");
    return x;
  }
  bool has(const std::string& k) const { return !f.at(k).empty(); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Row> parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header_line()) throw std::runtime_error("missing or unexpected header");
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line == header_line()) continue;  // concatenated tables
    const std::vector<std::string> cells = split(line);
    if (cells.size() != kColumns)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected " + std::to_string(kColumns) + " columns");
    Row r;
    for (std::size_t i = 0; i < kColumns; ++i) r.f[kHeader[i]] = cells[i];
    // Every numeric column that is filled in must parse.
    for (const char* k : {"omega", "value", "error", "vacuum", "photon_plus", "photon_minus", "cross"}) r.num(k);
    rows.push_back(std::move(r));
  }
  return rows;
}

// Groups rows by `key` and fits value against `x` where at least 8 points exist.
nlohmann::ordered_json fits(const std::vector<Row>& rows, const std::string& x,
                            const std::vector<std::string>& key) {
  std::map<std::vector<std::string>, std::vector<std::pair<double, double>>> groups;
  for (const Row& r : rows) {
    if (!r.has(x)) continue;
    std::vector<std::string> k;
    for (const std::string& c : key) k.push_back(r[c]);
    groups[k].emplace_back(r.num(x), r.num("value"));
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (auto& [k, s] : groups) {
    if (s.size() < 2) continue;
    std::sort(s.begin(), s.end());
    nlohmann::ordered_json g;
    nlohmann::ordered_json fixed;
    for (std::size_t i = 0; i < key.size(); ++i) fixed[key[i]] = k[i];
    g["fixed"] = fixed;
    g["x"] = x;
    std::vector<double> xs, ys;
    for (auto [a, b] : s) {
      xs.push_back(a);
      ys.push_back(b);
    }
    g[x] = xs;
    g["value"] = ys;
    if (s.size() >= 8) {
      try {
        const ScalingFit f = fit_power_law_window(s);
        g["fit"] = {{"exponent", f.exponent},     {"ci_halfwidth", f.ci_halfwidth}, {"x_min", f.rho_min},
                    {"x_max", f.rho_max},         {"r_squared", f.r_squared},       {"samples", f.samples}};
      } catch (const std::invalid_argument& e) {
        g["fit"] = {{"error", e.what()}};
      }
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace

int report(const std::string& results_path, const std::string& summary_path, std::ostream& log) {
  const std::optional<std::string> text = read_file(results_path);
  if (!text) {
    log << "error: cannot read '" << results_path << "'\n";
    return kExitIo;
  }
  std::vector<Row> rows;
  try {
    rows = parse_table(*text);
  } catch (const std::exception& e) {
    log << "error: malformed results table: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (rows.empty()) {
    log << "error: results table has no rows (empty sweep)\n";
    return kExitInvalid;
  }
  std::set<std::string> hashes;
  for (const Row& r : rows) hashes.insert(r["config_hash"]);
  if (hashes.size() != 1) {
    log << "error: results mix " << hashes.size() << " config hashes; refusing to summarize\n";
    return kExitInvalid;
  }
  const std::string hash = *hashes.begin();
  const fs::path manifest_path = fs::path(results_path).parent_path() / "manifest.json";
  if (fs::exists(manifest_path)) {
    const std::optional<std::string> mtext = read_file(manifest_path);
    if (!mtext) {
      log << "error: cannot read '" << manifest_path.string() << "'\n";
      return kExitIo;
    }
    const json m = json::parse(*mtext, nullptr, false);
    if (m.is_discarded() || !m.contains("config_hash") || m["config_hash"] != hash) {
      log << "error: results do not match " << manifest_path.string() << "\n";
      return kExitInvalid;
    }
  }

  nlohmann::ordered_json s;
  s["config_hash"] = hash;
  s["library_version"] = kVersion;
  s["rows"] = rows.size();
  s["scenario"] = rows.front()["scenario"];
  s["source"] = rows.front()["source"];
  std::size_t unmet = 0;
  for (const Row& r : rows)
    if (r["tolerance_met"] != "true") ++unmet;
  s["tolerance_unmet"] = unmet;

  try {
    nlohmann::ordered_json res = nlohmann::ordered_json::array();
    double max_enh = 0.0;
    for (const Row& r : rows) {
      if (!r.has("probe_plus")) continue;
      res.push_back({{"point", std::stoul(r["point"])},
                     {"omega", r.num("omega")},
                     {"classical_cutoff", r.num("k")},
                     {"plus", {{"probe", r.num("probe_plus")},
                               {"enhancement", r.num("enhancement_plus")},
                               {"regime", r["regime_plus"]}}},
                     {"minus", {{"probe", r.num("probe_minus")},
                                {"enhancement", r.num("enhancement_minus")},
                                {"regime", r["regime_minus"]}}}});
      max_enh = std::max({max_enh, r.num("enhancement_plus"), r.num("enhancement_minus")});
    }
    if (!res.empty()) {
      s["resolution"] = res;
      s["max_enhancement"] = max_enh;
    }
    const bool rod = rows.front()["scenario"] == "moving_rod";
    if (rod) {
      s["distance_scans"] = fits(rows, "rho", {"omega", "axial"});
      s["omega_scans"] = fits(rows, "omega", {"rho", "axial"});
    } else {
      s["distance_scans"] = fits(rows, "r", {"omega", "nx", "ny", "nz"});
      s["omega_scans"] = fits(rows, "omega", {"r", "nx", "ny", "nz"});
    }
  } catch (const std::exception& e) {
    log << "error: malformed results table: " << e.what() << "\n";
    return kExitInvalid;
  }

  if (!write_file(summary_path, s.dump(2) + "\n")) {
    log << "error: cannot write '" << summary_path << "'\n";
    return kExitIo;
  }
  log << "summary of " << rows.size() << " rows written to " << summary_path << "\n";
  return kExitOk;
}

}  // namespace tds::cli

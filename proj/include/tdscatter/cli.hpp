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

#ifndef TDSCATTER_CLI_HPP
#define TDSCATTER_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tdscatter/analysis.hpp"
#include "tdscatter/dielectric.hpp"
#include "tdscatter/photon.hpp"
#include "tdscatter/quadrature.hpp"
#include "tdscatter/vacuum.hpp"

namespace tds::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kSchema = "tdscatter.scenario/1";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitTolerance = 2;
inline constexpr int kExitIo = 3;

/// Invalid configuration; field() is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ScenarioKind { modulated, moving_rod };
enum class SourceKind { vacuum, one_photon, coherent };
enum class RodForm { covariant, tensor };
enum class Method { adaptive, monte_carlo };

std::string_view to_string(ScenarioKind k);
std::string_view to_string(SourceKind k);

struct SourceConfig {
  SourceKind kind = SourceKind::vacuum;
  Vec3 k = Vec3::UnitX();
  Pol2C polarization = Pol2C(1.0, 0.0);
  double envelope_norm = 1.0;
  Complex amplitude = 0.0;
};

/**
 * A parsed scenario.  Frequencies are in units of omega_ref and lengths in
 * units of 1/omega_ref; the numbers reach the library unchanged.
 */
struct ScenarioConfig {
  double omega_ref = 1.0;
  ScenarioKind scenario = ScenarioKind::modulated;

  ModulatedDielectric modulated;
  bool normalized_green = true;

  MovingRod rod;
  RodForm rod_form = RodForm::covariant;
  CovariantKinematics kinematics = CovariantKinematics::direct;
  RodTensorSign tensor_sign = RodTensorSign::green_consistent;

  std::vector<double> omega;
  std::vector<double> r;
  std::vector<Vec3> n;
  std::vector<double> rho;
  std::vector<double> axial;

  SourceConfig source;
  QuadratureSpec quadrature;
  Method method = Method::adaptive;
  std::size_t mc_samples = 1'000'000;
  double guard = kGuardBand;
  std::optional<std::uint64_t> seed;
};

/// Parses and validates a JSON scenario; throws ConfigError.
ScenarioConfig parse_config(const std::string& json_text,
                            std::optional<std::uint64_t> seed_override = std::nullopt);

/// FNV-1a (64 bit) of the canonical JSON of the effective configuration,
/// as 16 hex digits.
std::string config_hash(const std::string& json_text,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

struct SweepPoint {
  std::size_t index = 0;
  Detector detector;
};

/// omega x r x n (modulated) or omega x rho x axial (rod), row-major in that order.
std::vector<SweepPoint> expand_sweep(const ScenarioConfig& c);

struct PointResult {
  SweepPoint point;
  IntensityResult result;
  std::optional<ResolutionReport> resolution;
};

/// Evaluates every sweep point; results come back in point order whatever
/// the thread count.
std::vector<PointResult> evaluate(const ScenarioConfig& c, int threads);

/// One CSV row per point, full precision.
std::string results_csv(const ScenarioConfig& c, const std::vector<PointResult>& rows,
                        const std::string& hash);

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

/// `run`: writes <out>/results.csv and <out>/manifest.json.
int run(const std::string& config_path, const std::string& out_dir, const RunOptions& opts,
        std::ostream& log);

/// `report`: summary JSON from a results table.
int report(const std::string& results_path, const std::string& summary_path, std::ostream& log);

}  // namespace tds::cli

#endif  // TDSCATTER_CLI_HPP

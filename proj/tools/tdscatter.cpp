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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tdscatter/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scattering intensities of time-dependent dielectrics"};
  app.set_version_flag("--version", std::string(tds::cli::kVersion));
  app.require_subcommand(1);

  std::string config, out_dir;
  int threads = 1;
  std::optional<std::uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "Evaluate a scenario sweep");
  run->add_option("config", config, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Overrides the config seed");

  std::string results, summary;
  CLI::App* rep = app.add_subcommand("report", "Summarize a results table");
  rep->add_option("results", results, "results.csv")->required();
  rep->add_option("--out", summary, "Summary JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tds::cli::kExitInvalid;
  }

  if (*run) return tds::cli::run(config, out_dir, {threads, seed}, std::cerr);
  return tds::cli::report(results, summary, std::cerr);
}

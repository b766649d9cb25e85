// Copyright 2026 The ringcv Authors
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

// Command-line front end. Every subcommand takes a JSON configuration and
// writes a report bundle; see README.md for the schema, report formats and
// exit codes.

#include <string>

#include "CLI11.hpp"

#include "ringcv/runner.hpp"
#include "ringcv/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ring-cavity squeezed-state preparation simulator"};
  app.set_version_flag("--version", std::string("ringcv ") +
                                        ringcv::kVersionString);
  app.require_subcommand(1);

  std::string config_path;
  ringcv::RunnerOptions options;
  double threshold = 0.0;
  bool threshold_set = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON configuration file")
        ->required();
    sub->add_option("-o,--out", options.out_dir,
                    "output directory for reports (default: out)");
    sub->add_flag("--no-timestamp", options.no_timestamp,
                  "omit the timestamp for byte-identical reruns");
    sub->add_option("--threshold", threshold,
                    "override the pass threshold (protocol fidelity, oracle "
                    "tolerance)")
        ->each([&](const std::string&) { threshold_set = true; });
  };

  add_common(app.add_subcommand(
      "protocol", "run a preparation protocol and score it against its "
                  "target state"));
  add_common(app.add_subcommand(
      "steady-state", "solve the stationary covariance of a damped system"));
  add_common(app.add_subcommand(
      "evolve", "propagate a state under a damped system for a fixed time"));
  add_common(app.add_subcommand(
      "modes", "check collective-mode orthogonality for an ensemble "
               "geometry"));
  add_common(app.add_subcommand(
      "oracle", "cross-check the covariance route against the truncated "
                "number-basis route"));
  add_common(app.add_subcommand(
      "sweep", "run one command over a list of parameter values"));

  CLI11_PARSE(app, argc, argv);

  if (threshold_set) options.threshold = threshold;
  const std::string command = app.get_subcommands().front()->get_name();
  return ringcv::run_command(command, config_path, options);
}
